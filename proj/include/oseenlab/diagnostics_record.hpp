#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "oseenlab/norms.hpp"
#include "oseenlab/state.hpp"
#include "oseenlab/taper.hpp"

namespace oseenlab {

/// Per-step measurement row. The CSV column order is part of the external
/// interface: tau, wL2w, gradL2w, xiL2w, bL2w, bLinfw, mean, then the rest.
struct DiagnosticsRecord {
    double tau = 0.0;
    double w_l2w = 0.0;     // weighted L2 of w_tilde
    double grad_l2w = 0.0;  // weighted L2 of grad w_tilde
    double xi_l2w = 0.0;    // weighted L2 of |xi| w_tilde
    double b_l2w = 0.0;
    double b_linfw = 0.0;
    double mean_w = 0.0;
    double w_l4w = 0.0;
    double w_linfw = 0.0;
    double b_l4w = 0.0;
    double b_l2 = 0.0;  // plain norms, the exact transport law lives here
    double b_l4 = 0.0;
    double hs_w = 0.0;
    double boundary_w = 0.0;
    double boundary_b = 0.0;
    int pressure_iterations = 0;
    double cfl_margin = 0.0;

    static std::string csv_header() {
        return "tau,wL2w,gradL2w,xiL2w,bL2w,bLinfw,mean,wL4w,wLinfw,bL4w,bL2,bL4,hsw,"
               "boundary_w,boundary_b,pressure_iters,cfl_margin";
    }

    std::string csv_row() const {
        char buf[640];
        std::snprintf(buf, sizeof(buf),
                      "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,"
                      "%.17g,%.17g,%.17g,%d,%.17g",
                      tau, w_l2w, grad_l2w, xi_l2w, b_l2w, b_linfw, mean_w, w_l4w, w_linfw, b_l4w,
                      b_l2, b_l4, hs_w, boundary_w, boundary_b, pressure_iterations, cfl_margin);
        return buf;
    }

    bool all_finite() const {
        for (double v : {tau, w_l2w, grad_l2w, xi_l2w, b_l2w, b_linfw, mean_w, w_l4w, w_linfw,
                         b_l4w, b_l2, b_l4, hs_w, boundary_w, boundary_b, cfl_margin})
            if (!std::isfinite(v)) return false;
        return true;
    }
};

/// Grid quadrature of the vorticity perturbation (preserved at 0 by the flow).
inline double mean_vorticity(const ScalarField& w_tilde) { return integrate(w_tilde); }

namespace detail {

/// Weighted L2 of grad f with the far-field mask applied to the derivative:
/// spectral differentiation repopulates the corners with roundoff that the
/// Gaussian weight would otherwise amplify past the signal.
inline double weighted_l2_of_gradient_masked(const ScalarField& f) {
    ScalarField gx = far_field_tapered(spectral_derivative(f, 1, 1));
    ScalarField gy = far_field_tapered(spectral_derivative(f, 2, 1));
    const SpectralGrid& g = *f.grid();
    double s = 0.0;
    for (int i1 = 0; i1 < g.n; ++i1)
        for (int i2 = 0; i2 < g.n; ++i2) {
            const double e = weight_exponent(g, i1, i2);
            const std::size_t m = g.index(i1, i2);
            s += weighted_pair_value(e, gx.values()[m], gx.values()[m]) +
                 weighted_pair_value(e, gy.values()[m], gy.values()[m]);
        }
    s *= g.cell_area();
    if (!std::isfinite(s)) throw_weight_overflow();
    return std::sqrt(s);
}

}  // namespace detail

inline DiagnosticsRecord collect_diagnostics(const PerturbationState& state, double sobolev_s,
                                             int pressure_iterations, double boundary_w,
                                             double boundary_b, double cfl_margin) {
    const double inf = std::numeric_limits<double>::infinity();
    DiagnosticsRecord r;
    r.tau = state.tau;
    r.w_l2w = weighted_lp_norm(state.w_tilde, 2.0);
    r.grad_l2w = detail::weighted_l2_of_gradient_masked(state.w_tilde);
    r.xi_l2w = weighted_l2_of_radius_times(state.w_tilde);
    r.b_l2w = weighted_lp_norm(state.b, 2.0);
    r.b_linfw = weighted_lp_norm(state.b, inf);
    r.mean_w = mean_vorticity(state.w_tilde);
    r.w_l4w = weighted_lp_norm(state.w_tilde, 4.0);
    r.w_linfw = weighted_lp_norm(state.w_tilde, inf);
    r.b_l4w = weighted_lp_norm(state.b, 4.0);
    r.b_l2 = lp_norm(state.b, 2.0);
    r.b_l4 = lp_norm(state.b, 4.0);
    r.hs_w = sobolev_norm(state.w_tilde, sobolev_s);
    r.boundary_w = boundary_w;
    r.boundary_b = boundary_b;
    r.pressure_iterations = pressure_iterations;
    r.cfl_margin = cfl_margin;
    return r;
}

}  // namespace oseenlab
