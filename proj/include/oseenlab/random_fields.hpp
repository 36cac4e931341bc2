#pragma once

#include <cmath>
#include <random>

#include "oseenlab/field.hpp"
#include "oseenlab/norms.hpp"
#include "oseenlab/profiles.hpp"

namespace oseenlab {

/// Random real trig polynomial with modes |kappa| <= band_kappa, multiplied by
/// the Gaussian envelope e^{-|xi|^2/4}. The number and order of RNG draws
/// depend only on the band and the half-length, never on n, so the same seed
/// yields samples of one continuum field at every resolution.
inline ScalarField random_gaussian_enveloped(const GridPtr& grid, std::mt19937_64& rng,
                                             double band_kappa) {
    const SpectralGrid& g = *grid;
    const double k0 = std::numbers::pi / g.half_length;
    const int jb = static_cast<int>(std::floor(band_kappa / k0));
    if (2 * jb >= g.n)
        throw validation_error("random_gaussian_enveloped: band exceeds grid resolution");

    std::normal_distribution<double> normal(0.0, 1.0);
    Spectrum s(static_cast<std::size_t>(g.n) * g.n, 0.0);
    const double amp = 2.0 * g.half_length;  // O(1) field values
    for (int m1 = -jb; m1 <= jb; ++m1) {
        for (int m2 = -jb; m2 <= jb; ++m2) {
            // canonical half-plane; the conjugate partner is set alongside
            if (m1 < 0 || (m1 == 0 && m2 <= 0)) continue;
            if (std::hypot(m1 * k0, m2 * k0) > band_kappa) continue;
            const double re = normal(rng);
            const double im = normal(rng);
            const int i1 = m1 >= 0 ? m1 : m1 + g.n;
            const int i2 = m2 >= 0 ? m2 : m2 + g.n;
            const int c1 = (g.n - i1) % g.n;
            const int c2 = (g.n - i2) % g.n;
            s[g.index(i1, i2)] = std::complex<double>(re, im) * amp;
            s[g.index(c1, c2)] = std::complex<double>(re, -im) * amp;
        }
    }
    ScalarField f = ScalarField::from_spectrum(grid, std::move(s));
    auto& v = f.mutable_values();
    for (int i1 = 0; i1 < g.n; ++i1)
        for (int i2 = 0; i2 < g.n; ++i2) {
            const double x = g.coords[i1];
            const double y = g.coords[i2];
            v[g.index(i1, i2)] *= std::exp(-(x * x + y * y) / 4.0);
        }
    return f;
}

/// Subtract (integral of f) * G; keeps the field in the Gaussian-weighted
/// class while making it admissible for the Biot-Savart inversion.
inline ScalarField project_mean_zero(const ScalarField& f) {
    const double m = integrate(f);
    ScalarField g = oseen_vorticity_profile(f.grid());
    return f - m * g;
}

inline ScalarField random_mean_zero_field(const GridPtr& grid, std::mt19937_64& rng,
                                          double band_kappa) {
    return project_mean_zero(random_gaussian_enveloped(grid, rng, band_kappa));
}

}  // namespace oseenlab
