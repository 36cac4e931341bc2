#pragma once

#include "oseenlab/field.hpp"

namespace oseenlab {

/// (b, w_tilde, tau): inverse-density perturbation b = 1/rho - 1, vorticity
/// perturbation w_tilde = w - alpha G, and rescaled time tau = ln t.
struct PerturbationState {
    ScalarField b;
    ScalarField w_tilde;
    double tau = 0.0;

    PerturbationState() = default;
    PerturbationState(ScalarField b_, ScalarField w_, double tau_)
        : b(std::move(b_)), w_tilde(std::move(w_)), tau(tau_) {
        if (!same_grid(*b.grid(), *w_tilde.grid()))
            throw validation_error("PerturbationState: fields must share one grid");
    }

    const GridPtr& grid() const { return b.grid(); }
};

}  // namespace oseenlab
