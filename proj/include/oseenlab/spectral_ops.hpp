#pragma once

#include <complex>
#include <vector>

#include "oseenlab/field.hpp"
#include "oseenlab/grid.hpp"

namespace oseenlab {

namespace detail {

/// Multiply coefficients in place by (i*kappa_axis)^order. Odd orders zero
/// the unpaired Nyquist mode of that axis so real input maps to real output.
inline void derivative_multiplier(Spectrum& s, const SpectralGrid& g, int axis, int order) {
    const int n = g.n;
    const bool odd = order % 2 != 0;
    for (int j1 = 0; j1 < n; ++j1) {
        for (int j2 = 0; j2 < n; ++j2) {
            const int j = axis == 1 ? j1 : j2;
            std::complex<double> mult;
            if (odd && j == n / 2) {
                mult = 0.0;
            } else {
                const std::complex<double> ik(0.0, g.wavenumbers[j]);
                mult = std::complex<double>(1.0, 0.0);
                for (int p = 0; p < order; ++p) mult *= ik;
            }
            s[g.index(j1, j2)] *= mult;
        }
    }
}

inline bool mode_kept(const SpectralGrid& g, int j1, int j2) {
    const int s1 = std::abs(g.signed_mode(j1));
    const int s2 = std::abs(g.signed_mode(j2));
    return s1 <= g.dealias_cutoff && s2 <= g.dealias_cutoff;
}

}  // namespace detail

[[nodiscard]] inline ScalarField spectral_derivative(const ScalarField& f, int axis, int order) {
    if (axis != 1 && axis != 2) throw validation_error("spectral_derivative: axis must be 1 or 2");
    if (order < 1) throw validation_error("spectral_derivative: order must be positive");
    Spectrum s = f.spectrum();
    detail::derivative_multiplier(s, *f.grid(), axis, order);
    return ScalarField::from_spectrum(f.grid(), std::move(s));
}

[[nodiscard]] inline ScalarField laplacian(const ScalarField& f) {
    Spectrum s = f.spectrum();
    const SpectralGrid& g = *f.grid();
    for (int j1 = 0; j1 < g.n; ++j1) {
        const double k1 = g.wavenumbers[j1];
        for (int j2 = 0; j2 < g.n; ++j2) {
            const double k2 = g.wavenumbers[j2];
            s[g.index(j1, j2)] *= -(k1 * k1 + k2 * k2);
        }
    }
    return ScalarField::from_spectrum(f.grid(), std::move(s));
}

[[nodiscard]] inline VectorField gradient(const ScalarField& f) {
    return VectorField(spectral_derivative(f, 1, 1), spectral_derivative(f, 2, 1));
}

/// Perp gradient (-d2 f, d1 f).
[[nodiscard]] inline VectorField perp_gradient(const ScalarField& f) {
    return VectorField(-1.0 * spectral_derivative(f, 2, 1), spectral_derivative(f, 1, 1));
}

[[nodiscard]] inline ScalarField divergence(const VectorField& v) {
    return spectral_derivative(v.x, 1, 1) + spectral_derivative(v.y, 2, 1);
}

/// Scalar 2D curl: d1 v2 - d2 v1.
[[nodiscard]] inline ScalarField curl(const VectorField& v) {
    return spectral_derivative(v.y, 1, 1) - spectral_derivative(v.x, 2, 1);
}

/// 2/3-rule dealiasing: zero every mode whose signed index exceeds the grid
/// cutoff on either axis.
inline void dealias_spectrum(Spectrum& s, const SpectralGrid& g) {
    for (int j1 = 0; j1 < g.n; ++j1)
        for (int j2 = 0; j2 < g.n; ++j2)
            if (!detail::mode_kept(g, j1, j2)) s[g.index(j1, j2)] = 0.0;
}

[[nodiscard]] inline Spectrum dealias(Spectrum s, const SpectralGrid& g) {
    dealias_spectrum(s, g);
    return s;
}

[[nodiscard]] inline ScalarField dealias(const ScalarField& f) {
    Spectrum s = f.spectrum();
    dealias_spectrum(s, *f.grid());
    return ScalarField::from_spectrum(f.grid(), std::move(s));
}

/// Pointwise product followed by the 2/3 rule, the standard treatment of
/// quadratic terms in pseudo-spectral right-hand sides.
[[nodiscard]] inline ScalarField dealiased_product(const ScalarField& a, const ScalarField& b) {
    return dealias(pointwise_product(a, b));
}

/// Spectrum of the dealiased pointwise product (saves the final inverse
/// transform when the result feeds a spectral sum).
[[nodiscard]] inline Spectrum dealiased_product_spectrum(const ScalarField& a, const ScalarField& b) {
    ScalarField p = pointwise_product(a, b);
    Spectrum s = p.spectrum();
    dealias_spectrum(s, *a.grid());
    return s;
}

}  // namespace oseenlab
