#pragma once

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <utility>

#include "oseenlab/norms.hpp"
#include "oseenlab/profiles.hpp"
#include "oseenlab/spectral_ops.hpp"

namespace oseenlab {

namespace detail {

struct GridProfiles {
    ScalarField G;
    ScalarField G_sqrt;
    VectorField vG;
    VectorField grad_G;       // -(xi/2) G
    VectorField perp_grad_G;  // -(xi_perp/2) G; also the vector Laplacian of v^G
    VelocityJacobian vG_jacobian;
};

inline const GridProfiles& grid_profiles(const GridPtr& grid) {
    static std::mutex m;
    static std::map<std::pair<int, double>, std::unique_ptr<GridProfiles>> cache;
    std::lock_guard<std::mutex> lock(m);
    const auto key = std::make_pair(grid->n, grid->half_length);
    auto it = cache.find(key);
    if (it == cache.end()) {
        auto p = std::make_unique<GridProfiles>();
        p->G = oseen_vorticity_profile(grid);
        p->G_sqrt = gaussian_sqrt_profile(grid);
        p->vG = oseen_velocity_profile(grid);
        p->grad_G = gaussian_vortex_gradient(grid);
        p->perp_grad_G = gaussian_vortex_perp_gradient(grid);
        p->vG_jacobian = oseen_velocity_jacobian(grid);
        it = cache.emplace(key, std::move(p)).first;
    }
    return *it->second;
}

}  // namespace detail

/// Velocity from mean-zero vorticity by the Biot-Savart multiplier. With the
/// analysis kernel e^{-i k x} the multiplier is -i k_perp / |k|^2, which is
/// the unique choice with div v = 0 and curl v = w discretely. Zero mode and
/// unpaired Nyquist rows are annihilated.
inline VectorField biot_savart(const ScalarField& w) {
    const SpectralGrid& g = *w.grid();
    const Spectrum& s = w.spectrum();
    const double mean = std::abs(s[0]) / (4.0 * g.half_length * g.half_length);
    if (mean > 1e-8 * lp_norm(w, 2.0) && mean > 1e-300)
        throw validation_error("nonzero-mean vorticity: use velocity_total");

    Spectrum sx(s.size()), sy(s.size());
    const int ny = g.n / 2;
    for (int j1 = 0; j1 < g.n; ++j1) {
        const double k1 = g.wavenumbers[j1];
        for (int j2 = 0; j2 < g.n; ++j2) {
            const double k2 = g.wavenumbers[j2];
            const std::size_t m = g.index(j1, j2);
            const double k_sq = k1 * k1 + k2 * k2;
            if (k_sq == 0.0 || j1 == ny || j2 == ny) {
                sx[m] = sy[m] = 0.0;
                continue;
            }
            // -i kappa_perp / |kappa|^2, kappa_perp = (-k2, k1)
            sx[m] = std::complex<double>(0.0, k2 / k_sq) * s[m];
            sy[m] = std::complex<double>(0.0, -k1 / k_sq) * s[m];
        }
    }
    return VectorField(ScalarField::from_spectrum(w.grid(), std::move(sx)),
                       ScalarField::from_spectrum(w.grid(), std::move(sy)));
}

/// v = alpha v^G + K_BS * w_tilde: total velocity of vorticity alpha G + w_tilde.
/// The profile part carries the nonzero circulation in closed form; only the
/// mean-zero perturbation goes through the periodic Biot-Savart inversion.
inline VectorField velocity_total(double alpha, const ScalarField& w_tilde) {
    const auto& prof = detail::grid_profiles(w_tilde.grid());
    VectorField v = biot_savart(w_tilde);
    const auto& gx = prof.vG.x.values();
    const auto& gy = prof.vG.y.values();
    auto& vx = v.x.mutable_values();
    auto& vy = v.y.mutable_values();
    for (std::size_t i = 0; i < vx.size(); ++i) {
        vx[i] += alpha * gx[i];
        vy[i] += alpha * gy[i];
    }
    return v;
}

/// I^s f = (-Laplacian)^{s/2} f: multiplier |kappa|^s with the zero mode
/// mapped to 0 for every s, including s < 0.
inline ScalarField fractional_laplacian(const ScalarField& f, double s) {
    const SpectralGrid& g = *f.grid();
    Spectrum c = f.spectrum();
    for (int j1 = 0; j1 < g.n; ++j1) {
        const double k1 = g.wavenumbers[j1];
        for (int j2 = 0; j2 < g.n; ++j2) {
            const double k2 = g.wavenumbers[j2];
            const double k_sq = k1 * k1 + k2 * k2;
            c[g.index(j1, j2)] *= k_sq == 0.0 ? 0.0 : std::pow(k_sq, 0.5 * s);
        }
    }
    return ScalarField::from_spectrum(f.grid(), std::move(c));
}

/// Kato-Ponce commutator I^s(fg) - f I^s g, products dealiased.
inline ScalarField commutator_Is(const ScalarField& f, const ScalarField& g, double s) {
    ScalarField fg = dealiased_product(f, g);
    ScalarField second = dealiased_product(f, fractional_laplacian(g, s));
    return fractional_laplacian(fg, s) - second;
}

/// Fokker-Planck operator L f = Laplacian f + (xi/2) . grad f + f.
/// Derivatives are spectral; the coordinate product is pointwise in box
/// coordinates and dealiased. Admissible inputs vanish at the box face, so
/// the coordinate sawtooth only ever multiplies machine-zero values there.
inline ScalarField op_L(const ScalarField& f) {
    const SpectralGrid& g = *f.grid();
    const ScalarField d1 = spectral_derivative(f, 1, 1);
    const ScalarField d2 = spectral_derivative(f, 2, 1);
    ScalarField drift(f.grid());
    auto& dv = drift.mutable_values();
    for (int i1 = 0; i1 < g.n; ++i1)
        for (int i2 = 0; i2 < g.n; ++i2) {
            const std::size_t m = g.index(i1, i2);
            dv[m] = 0.5 * (g.coords[i1] * d1.values()[m] + g.coords[i2] * d2.values()[m]);
        }
    Spectrum s = drift.spectrum();
    dealias_spectrum(s, g);
    const Spectrum& fs = f.spectrum();
    for (int j1 = 0; j1 < g.n; ++j1) {
        const double k1 = g.wavenumbers[j1];
        for (int j2 = 0; j2 < g.n; ++j2) {
            const double k2 = g.wavenumbers[j2];
            const std::size_t m = g.index(j1, j2);
            s[m] += (1.0 - (k1 * k1 + k2 * k2)) * fs[m];
        }
    }
    return ScalarField::from_spectrum(f.grid(), std::move(s));
}

/// Nonlocal linearized advection Lambda f = v^G . grad f + (K_BS * f) . grad G.
inline ScalarField op_Lambda(const ScalarField& f) {
    const auto& prof = detail::grid_profiles(f.grid());
    const VectorField vf = biot_savart(f);
    const VectorField gf = gradient(f);
    ScalarField term1 =
        pointwise_product(prof.vG.x, gf.x) + pointwise_product(prof.vG.y, gf.y);
    ScalarField term2 =
        pointwise_product(vf.x, prof.grad_G.x) + pointwise_product(vf.y, prof.grad_G.y);
    return dealias(term1) + dealias(term2);
}

/// Conjugated harmonic oscillator G^{-1/2}(-L)G^{1/2} f, computed from its
/// explicit form -Laplacian f + (|xi|^2/16) f - f/2 (conjugating numerically
/// would overflow the Gaussian weights).
inline ScalarField conjugated_oscillator(const ScalarField& f) {
    const SpectralGrid& g = *f.grid();
    ScalarField r = laplacian(f);
    auto& rv = r.mutable_values();
    const auto& fv = f.values();
    for (int i1 = 0; i1 < g.n; ++i1)
        for (int i2 = 0; i2 < g.n; ++i2) {
            const double x = g.coords[i1];
            const double y = g.coords[i2];
            const std::size_t m = g.index(i1, i2);
            rv[m] = -rv[m] + ((x * x + y * y) / 16.0 - 0.5) * fv[m];
        }
    return r;
}

/// Matrix-free apply of the conjugated oscillator on raw sample vectors,
/// the form consumed by the eigensolver.
inline void conjugated_oscillator_apply(const GridPtr& grid, const std::vector<double>& in,
                                        std::vector<double>& out) {
    ScalarField f(grid, in);
    out = conjugated_oscillator(f).values();
}

}  // namespace oseenlab
