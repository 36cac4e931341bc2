#pragma once

#include <cmath>
#include <complex>
#include <optional>
#include <utility>
#include <vector>

#include "oseenlab/fft.hpp"
#include "oseenlab/grid.hpp"

namespace oseenlab {

using Spectrum = std::vector<std::complex<double>>;

/// Real scalar samples on a SpectralGrid with a lazily computed, cached
/// spectrum. Mutating the samples invalidates the cache. Copies are deep:
/// a field is a value-semantic snapshot.
class ScalarField {
  public:
    ScalarField() = default;

    explicit ScalarField(GridPtr grid)
        : grid_(std::move(grid)),
          values_(static_cast<std::size_t>(grid_->n) * grid_->n, 0.0) {}

    ScalarField(GridPtr grid, std::vector<double> values) : grid_(std::move(grid)), values_(std::move(values)) {
        if (values_.size() != static_cast<std::size_t>(grid_->n) * grid_->n)
            throw validation_error("ScalarField: values size does not match grid");
    }

    static ScalarField from_spectrum(GridPtr grid, Spectrum coeffs) {
        if (coeffs.size() != static_cast<std::size_t>(grid->n) * grid->n)
            throw validation_error("ScalarField::from_spectrum: coeffs size does not match grid");
        ScalarField f(grid);
        detail::FftEngine::for_size(grid->n).inverse(*grid, coeffs.data(), f.values_.data());
        f.spectrum_ = std::move(coeffs);
        return f;
    }

    const GridPtr& grid() const { return grid_; }
    int n() const { return grid_->n; }
    std::size_t size() const { return values_.size(); }

    const std::vector<double>& values() const { return values_; }
    std::vector<double>& mutable_values() {
        spectrum_.reset();
        return values_;
    }

    double operator()(int i1, int i2) const { return values_[grid_->index(i1, i2)]; }

    /// Lazily computed Fourier coefficients. Rejects non-finite samples.
    const Spectrum& spectrum() const {
        if (!spectrum_) {
            for (double v : values_)
                if (!std::isfinite(v))
                    throw validation_error("transform: non-finite samples rejected");
            Spectrum s(values_.size());
            detail::FftEngine::for_size(grid_->n).forward(*grid_, values_.data(), s.data());
            spectrum_ = std::move(s);
        }
        return *spectrum_;
    }

    bool has_spectrum() const { return spectrum_.has_value(); }

  private:
    GridPtr grid_;
    std::vector<double> values_;
    mutable std::optional<Spectrum> spectrum_;
};

/// Two-component vector field; both components share one grid.
struct VectorField {
    ScalarField x;
    ScalarField y;

    VectorField() = default;
    explicit VectorField(GridPtr grid) : x(grid), y(std::move(grid)) {}
    VectorField(ScalarField c1, ScalarField c2) : x(std::move(c1)), y(std::move(c2)) {
        if (!same_grid(*x.grid(), *y.grid()))
            throw validation_error("VectorField: components must share one grid");
    }

    const GridPtr& grid() const { return x.grid(); }
};

inline ScalarField transform_copy_check(const ScalarField& f) { return f; }

/// Spec surface: transform(f) -> coefficients (copy of the cached spectrum).
inline Spectrum transform(const ScalarField& f) { return f.spectrum(); }

/// Spec surface: inverse_transform(coeffs, grid) -> field.
inline ScalarField inverse_transform(Spectrum coeffs, GridPtr grid) {
    return ScalarField::from_spectrum(std::move(grid), std::move(coeffs));
}

// Small arithmetic helpers used across the operators.

inline ScalarField operator+(const ScalarField& a, const ScalarField& b) {
    ScalarField r = a;
    auto& v = r.mutable_values();
    const auto& w = b.values();
    for (std::size_t i = 0; i < v.size(); ++i) v[i] += w[i];
    return r;
}

inline ScalarField operator-(const ScalarField& a, const ScalarField& b) {
    ScalarField r = a;
    auto& v = r.mutable_values();
    const auto& w = b.values();
    for (std::size_t i = 0; i < v.size(); ++i) v[i] -= w[i];
    return r;
}

inline ScalarField operator*(double s, const ScalarField& a) {
    ScalarField r = a;
    for (auto& v : r.mutable_values()) v *= s;
    return r;
}

inline VectorField operator+(const VectorField& a, const VectorField& b) {
    return VectorField(a.x + b.x, a.y + b.y);
}

inline VectorField operator-(const VectorField& a, const VectorField& b) {
    return VectorField(a.x - b.x, a.y - b.y);
}

inline VectorField operator*(double s, const VectorField& a) {
    return VectorField(s * a.x, s * a.y);
}

inline ScalarField pointwise_product(const ScalarField& a, const ScalarField& b) {
    ScalarField r = a;
    auto& v = r.mutable_values();
    const auto& w = b.values();
    for (std::size_t i = 0; i < v.size(); ++i) v[i] *= w[i];
    return r;
}

inline double max_abs(const ScalarField& f) {
    double m = 0.0;
    for (double v : f.values()) m = std::max(m, std::abs(v));
    return m;
}

inline double max_abs(const VectorField& f) {
    double m = 0.0;
    const auto& vx = f.x.values();
    const auto& vy = f.y.values();
    for (std::size_t i = 0; i < vx.size(); ++i)
        m = std::max(m, std::hypot(vx[i], vy[i]));
    return m;
}

}  // namespace oseenlab
