#pragma once

#include <cmath>
#include <random>

#include "oseenlab/config.hpp"
#include "oseenlab/norms.hpp"
#include "oseenlab/random_fields.hpp"
#include "oseenlab/state.hpp"
#include "oseenlab/taper.hpp"

namespace oseenlab {

namespace detail {

inline double hermite_poly(int k, double x) {
    // physicists' Hermite: H_0 = 1, H_1 = 2x, H_{k+1} = 2x H_k - 2k H_{k-1}
    double h0 = 1.0, h1 = 2.0 * x;
    if (k == 0) return h0;
    if (k == 1) return h1;
    for (int i = 1; i < k; ++i) {
        const double h2 = 2.0 * x * h1 - 2.0 * i * h0;
        h0 = h1;
        h1 = h2;
    }
    return h1;
}

inline ScalarField perturbation_shape(const RunConfig& cfg, const GridPtr& grid,
                                      std::mt19937_64& rng) {
    switch (cfg.shape) {
        case PerturbationShape::gaussian_dipole: {
            ScalarField f(grid);
            auto& v = f.mutable_values();
            for (int i1 = 0; i1 < grid->n; ++i1)
                for (int i2 = 0; i2 < grid->n; ++i2) {
                    const double x = grid->coords[i1];
                    const double y = grid->coords[i2];
                    v[grid->index(i1, i2)] =
                        std::exp(-((x - 1.0) * (x - 1.0) + y * y) / 4.0) -
                        std::exp(-((x + 1.0) * (x + 1.0) + y * y) / 4.0);
                }
            return f;
        }
        case PerturbationShape::hermite_mode: {
            ScalarField f = oseen_vorticity_profile(grid);
            auto& v = f.mutable_values();
            for (int i1 = 0; i1 < grid->n; ++i1)
                for (int i2 = 0; i2 < grid->n; ++i2)
                    v[grid->index(i1, i2)] *= hermite_poly(cfg.hermite_n1, grid->coords[i1] / 2.0) *
                                              hermite_poly(cfg.hermite_n2, grid->coords[i2] / 2.0);
            return f;
        }
        case PerturbationShape::random_bandlimited:
            return random_gaussian_enveloped(grid, rng, cfg.band_kappa);
    }
    throw validation_error("make_initial_perturbation: unknown shape");
}

inline ScalarField density_shape(const RunConfig& cfg, const GridPtr& grid, std::mt19937_64& rng) {
    if (cfg.shape == PerturbationShape::random_bandlimited)
        return random_gaussian_enveloped(grid, rng, cfg.band_kappa);
    ScalarField f(grid);
    auto& v = f.mutable_values();
    for (int i1 = 0; i1 < grid->n; ++i1)
        for (int i2 = 0; i2 < grid->n; ++i2) {
            const double x = grid->coords[i1];
            const double y = grid->coords[i2];
            v[grid->index(i1, i2)] = std::exp(-(x * x + y * y) / 4.0);
        }
    return f;
}

}  // namespace detail

/// Build (b0, w_tilde0) at tau = 0: Gaussian-enveloped shapes, w_tilde
/// mean-projected by subtracting (integral) * G (a constant shift would leave
/// the weighted class), then rescaled so the weighted L^2 norm of w_tilde0 is
/// exactly epsilon and both weighted norms of b0 are at most epsilon_b.
inline PerturbationState make_initial_perturbation(const RunConfig& cfg, const GridPtr& grid) {
    std::mt19937_64 rng(cfg.seed);
    PerturbationState state{ScalarField(grid), ScalarField(grid), 0.0};

    if (cfg.epsilon > 0.0) {
        ScalarField w = detail::perturbation_shape(cfg, grid, rng);
        apply_far_field_taper(w);
        const double norm_before = weighted_lp_norm(w, 2.0);
        w = project_mean_zero(w);
        const double norm = weighted_lp_norm(w, 2.0);
        // a shape that loses essentially all weighted mass to the projection
        // was proportional to G; what survives is quadrature residue
        if (!(norm > 1e-6 * norm_before))
            throw validation_error("make_initial_perturbation: shape is degenerate (zero after "
                                   "mean projection)");
        state.w_tilde = project_mean_zero((cfg.epsilon / norm) * w);
    }

    if (cfg.epsilon_b > 0.0) {
        ScalarField b = detail::density_shape(cfg, grid, rng);
        apply_far_field_taper(b);
        const double n2 = weighted_lp_norm(b, 2.0);
        const double ninf = weighted_lp_norm(b, std::numeric_limits<double>::infinity());
        const double norm = std::max(n2, ninf);
        if (!(norm > 0.0))
            throw validation_error("make_initial_perturbation: density shape is degenerate");
        b = (cfg.epsilon_b / norm) * b;
        double min_density = std::numeric_limits<double>::infinity();
        for (double v : b.values()) min_density = std::min(min_density, 1.0 + v);
        if (!(min_density > 0.0))
            throw validation_error("make_initial_perturbation: epsilon_b forces 1 + b <= 0 "
                                   "(density positivity violated)");
        state.b = std::move(b);
    }
    return state;
}

}  // namespace oseenlab
