#pragma once

#include <cmath>
#include <limits>
#include <numbers>

#include "oseenlab/field.hpp"
#include "oseenlab/spectral_ops.hpp"

namespace oseenlab {

/// Grid quadrature of f (rectangle rule, spectrally accurate for smooth
/// decaying integrands).
inline double integrate(const ScalarField& f) {
    double s = 0.0;
    for (double v : f.values()) s += v;
    return s * f.grid()->cell_area();
}

/// L^p norm by grid quadrature; p = infinity returns max |f|.
inline double lp_norm(const ScalarField& f, double p) {
    if (!(p >= 1.0)) throw validation_error("lp_norm: p must be >= 1");
    if (std::isinf(p)) return max_abs(f);
    double s = 0.0;
    if (p == 2.0) {
        for (double v : f.values()) s += v * v;
    } else {
        for (double v : f.values()) s += std::pow(std::abs(v), p);
    }
    return std::pow(s * f.grid()->cell_area(), 1.0 / p);
}

namespace detail {

/// Exponent of the Gaussian weight G^{-1/2} = sqrt(4 pi) e^{|xi|^2/8}.
inline double weight_exponent(const SpectralGrid& g, int i1, int i2) {
    const double x = g.coords[i1];
    const double y = g.coords[i2];
    return (x * x + y * y) / 8.0;
}

/// G^{-1/2}(xi) * f. On large boxes the bare weight exceeds the double range
/// even where the (admissible) field has underflowed to zero, so the product
/// is formed in log space there. A genuinely non-decaying field still
/// produces a non-finite result, which callers surface as inadmissibility.
inline double weighted_value(double expo, double f) {
    if (f == 0.0) return 0.0;
    static const double sqrt_4pi = std::sqrt(4.0 * std::numbers::pi);
    static const double log_sqrt_4pi = 0.5 * std::log(4.0 * std::numbers::pi);
    if (expo < 700.0) return sqrt_4pi * std::exp(expo) * f;
    return std::copysign(std::exp(expo + log_sqrt_4pi + std::log(std::abs(f))), f);
}

/// Joint product (G^{-1/2} a)(G^{-1/2} b). A factor that is exactly zero
/// makes the product exactly zero regardless of the weight's double-range
/// representation, so the pair is guarded and formed in log space jointly.
inline double weighted_pair_value(double expo, double a, double b) {
    if (a == 0.0 || b == 0.0) return 0.0;
    static const double four_pi = 4.0 * std::numbers::pi;
    static const double log_four_pi = std::log(4.0 * std::numbers::pi);
    if (expo < 350.0) return four_pi * std::exp(2.0 * expo) * a * b;
    const double sign = std::signbit(a) == std::signbit(b) ? 1.0 : -1.0;
    return sign *
           std::exp(2.0 * expo + log_four_pi + std::log(std::abs(a)) + std::log(std::abs(b)));
}

[[noreturn]] inline void throw_weight_overflow() {
    throw numerical_error("weight overflow: field not in weighted space at this resolution");
}

}  // namespace detail

/// Samples of G^{-1/2} f. Non-finite entries signal that f is not in the
/// Gaussian-weighted class at this resolution and are surfaced as an error.
inline ScalarField apply_inverse_sqrt_weight(const ScalarField& f) {
    const SpectralGrid& g = *f.grid();
    ScalarField r = f;
    auto& v = r.mutable_values();
    for (int i1 = 0; i1 < g.n; ++i1)
        for (int i2 = 0; i2 < g.n; ++i2) {
            double& x = v[g.index(i1, i2)];
            x = detail::weighted_value(detail::weight_exponent(g, i1, i2), x);
            if (!std::isfinite(x)) detail::throw_weight_overflow();
        }
    return r;
}

/// Weighted norm |G^{-1/2} f|_p of the Gaussian-weighted space L^p_w.
inline double weighted_lp_norm(const ScalarField& f, double p) {
    if (!(p >= 1.0)) throw validation_error("weighted_lp_norm: p must be >= 1");
    ScalarField wf = apply_inverse_sqrt_weight(f);
    const double r = lp_norm(wf, p);
    if (!std::isfinite(r)) detail::throw_weight_overflow();
    return r;
}

/// Weighted inner product <G^{-1} f, g> computed as <G^{-1/2} f, G^{-1/2} g>.
inline double weighted_inner_product(const ScalarField& f, const ScalarField& g) {
    const SpectralGrid& gr = *f.grid();
    const auto& fv = f.values();
    const auto& gv = g.values();
    double s = 0.0;
    for (int i1 = 0; i1 < gr.n; ++i1)
        for (int i2 = 0; i2 < gr.n; ++i2) {
            const double e = detail::weight_exponent(gr, i1, i2);
            const std::size_t m = gr.index(i1, i2);
            s += detail::weighted_pair_value(e, fv[m], gv[m]);
        }
    s *= gr.cell_area();
    if (!std::isfinite(s)) detail::throw_weight_overflow();
    return s;
}

namespace detail {

inline double sobolev_accumulate(const ScalarField& f, double s, bool homogeneous) {
    const SpectralGrid& g = *f.grid();
    const Spectrum& c = f.spectrum();
    double acc = 0.0;
    for (int j1 = 0; j1 < g.n; ++j1) {
        const double k1 = g.wavenumbers[j1];
        for (int j2 = 0; j2 < g.n; ++j2) {
            const double k2 = g.wavenumbers[j2];
            const double k_sq = k1 * k1 + k2 * k2;
            if (homogeneous && k_sq == 0.0) continue;
            const double weight = homogeneous ? std::pow(k_sq, s) : std::pow(1.0 + k_sq, s);
            acc += weight * std::norm(c[g.index(j1, j2)]);
        }
    }
    // Parseval in this normalization: |f|_2^2 = sum |f_hat|^2 / (2L)^2.
    return std::sqrt(acc) / (2.0 * g.half_length);
}

}  // namespace detail

/// H^s norm (sum (1+|k|^2)^s |f_hat|^2)^{1/2} in grid-consistent normalization.
inline double sobolev_norm(const ScalarField& f, double s) {
    return detail::sobolev_accumulate(f, s, false);
}

/// Homogeneous norm |I^s f|_2 with the zero mode excluded.
inline double homogeneous_sobolev_norm(const ScalarField& f, double s) {
    return detail::sobolev_accumulate(f, s, true);
}

/// Weighted L^2 norm of the euclidean gradient magnitude |G^{-1/2} grad f|_2.
inline double weighted_l2_of_gradient(const ScalarField& f) {
    const VectorField gr = gradient(f);
    const SpectralGrid& g = *f.grid();
    const auto& gx = gr.x.values();
    const auto& gy = gr.y.values();
    double s = 0.0;
    for (int i1 = 0; i1 < g.n; ++i1)
        for (int i2 = 0; i2 < g.n; ++i2) {
            const double e = detail::weight_exponent(g, i1, i2);
            const std::size_t m = g.index(i1, i2);
            const double wx = detail::weighted_value(e, gx[m]);
            const double wy = detail::weighted_value(e, gy[m]);
            s += wx * wx + wy * wy;
        }
    s *= g.cell_area();
    if (!std::isfinite(s)) detail::throw_weight_overflow();
    return std::sqrt(s);
}

/// Weighted L^2 norm of |xi| f.
inline double weighted_l2_of_radius_times(const ScalarField& f) {
    const SpectralGrid& g = *f.grid();
    const auto& fv = f.values();
    double s = 0.0;
    for (int i1 = 0; i1 < g.n; ++i1)
        for (int i2 = 0; i2 < g.n; ++i2) {
            const double x = g.coords[i1];
            const double y = g.coords[i2];
            const double e = detail::weight_exponent(g, i1, i2);
            const double v = detail::weighted_value(e, fv[g.index(i1, i2)]);
            s += (x * x + y * y) * v * v;
        }
    s *= g.cell_area();
    if (!std::isfinite(s)) detail::throw_weight_overflow();
    return std::sqrt(s);
}

/// Max |f| on the outermost two cells of the box, the boundary-mass monitor
/// for operators that multiply by the non-periodic coordinate.
inline double boundary_ring_max(const ScalarField& f) {
    const SpectralGrid& g = *f.grid();
    const int n = g.n;
    double m = 0.0;
    auto look = [&](int i1, int i2) { m = std::max(m, std::abs(f(i1, i2))); };
    for (int i = 0; i < n; ++i) {
        look(0, i);
        look(1, i);
        look(n - 1, i);
        look(n - 2, i);
        look(i, 0);
        look(i, 1);
        look(i, n - 1);
        look(i, n - 2);
    }
    return m;
}

}  // namespace oseenlab
