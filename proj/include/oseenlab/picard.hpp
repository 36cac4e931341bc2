#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "oseenlab/evolution.hpp"

namespace oseenlab {

/// One iterate of the linearization scheme: a full trajectory on [0, T] of
/// the system with the advecting velocity and the divergence coefficient
/// frozen at the previous iterate, plus the delta norms against it.
struct PicardIterate {
    int index = 0;
    std::vector<double> taus;
    std::vector<PerturbationState> states;
    std::vector<double> delta_b_wp;  // weighted L^p of b_k - b_{k-1} per sample
    std::vector<double> delta_w_w2;  // weighted L^2 of w_k - w_{k-1} per sample

    bool is_seed() const { return index == 0; }

    double sup_delta() const {
        double sup_sq = 0.0;
        for (std::size_t i = 0; i < delta_b_wp.size(); ++i)
            sup_sq = std::max(sup_sq,
                              delta_b_wp[i] * delta_b_wp[i] + delta_w_w2[i] * delta_w_w2[i]);
        return std::sqrt(sup_sq);
    }
};

/// Index 0: the scheme's seed, interpreted as the zero trajectory (the first
/// real iterate solves the system with frozen v_tilde = 0 and b = 0).
inline PicardIterate picard_seed() { return PicardIterate{}; }

namespace detail {

/// Linear-in-time interpolation of the previous iterate's trajectory; the
/// interpolation error is second order in the sample spacing and folds into
/// the cross-solver tolerance.
class FrozenTrajectory {
  public:
    FrozenTrajectory(const PicardIterate& prev, const GridPtr& grid)
        : prev_(&prev), zero_(grid), b_interp_(grid), w_interp_(grid) {}

    FrozenFields at(double t) {
        if (prev_->is_seed()) return FrozenFields{&zero_, &zero_};
        const auto& taus = prev_->taus;
        std::size_t hi = 1;
        while (hi + 1 < taus.size() && taus[hi] < t) ++hi;
        const std::size_t lo = hi - 1;
        const double span = taus[hi] - taus[lo];
        double theta = span > 0.0 ? (t - taus[lo]) / span : 0.0;
        theta = std::min(1.0, std::max(0.0, theta));
        blend(prev_->states[lo].b, prev_->states[hi].b, theta, b_interp_);
        blend(prev_->states[lo].w_tilde, prev_->states[hi].w_tilde, theta, w_interp_);
        return FrozenFields{&b_interp_, &w_interp_};
    }

  private:
    static void blend(const ScalarField& a, const ScalarField& b, double theta, ScalarField& out) {
        auto& o = out.mutable_values();
        const auto& av = a.values();
        const auto& bv = b.values();
        for (std::size_t i = 0; i < o.size(); ++i) o[i] = (1.0 - theta) * av[i] + theta * bv[i];
    }

    const PicardIterate* prev_;
    ScalarField zero_;
    ScalarField b_interp_;
    ScalarField w_interp_;
};

}  // namespace detail

/// Solve the linearized system on [0, t_end] with the advecting fields frozen
/// at `prev`, producing the next iterate with its delta norms.
inline PicardIterate picard_step(const PicardIterate& prev, const RunConfig& cfg) {
    auto grid = make_grid(cfg.n, cfg.half_length);
    PerturbationState state = make_initial_perturbation(cfg, grid);

    StepOptions opt;
    opt.pressure_tol = cfg.pressure_tol;
    opt.hyperviscosity = cfg.hyperviscosity;
    opt.cfl = cfg.cfl;
    opt.drop_transport = cfg.drop_transport;

    const double dt = auto_time_step(cfg, grid, state);
    detail::FrozenTrajectory frozen(prev, grid);
    auto frozen_at = [&frozen](double t) { return frozen.at(t); };

    PicardIterate out;
    out.index = prev.index + 1;

    auto sample = [&](const PerturbationState& s) {
        out.taus.push_back(s.tau);
        out.states.push_back(s);
    };
    sample(state);

    int k = 0;
    const double t_end = cfg.t_end;
    while (state.tau < t_end - 1e-12) {
        const double h = std::min(dt, t_end - state.tau);
        try {
            auto [next, stats] = step(state, cfg.alpha, h, opt, frozen_at);
            state = std::move(next);
        } catch (const numerical_error& e) {
            throw numerical_error("picard iterate " + std::to_string(out.index) + ": " + e.what());
        }
        ++k;
        if (k % cfg.sample_every == 0 || state.tau >= t_end - 1e-12) sample(state);
    }

    // delta norms vs the previous trajectory (vs zero for the first iterate)
    const double p = cfg.weighted_q;
    for (std::size_t i = 0; i < out.states.size(); ++i) {
        if (prev.is_seed()) {
            out.delta_b_wp.push_back(weighted_lp_norm(out.states[i].b, p));
            out.delta_w_w2.push_back(weighted_lp_norm(out.states[i].w_tilde, 2.0));
        } else {
            out.delta_b_wp.push_back(weighted_lp_norm(out.states[i].b - prev.states[i].b, p));
            out.delta_w_w2.push_back(
                weighted_lp_norm(out.states[i].w_tilde - prev.states[i].w_tilde, 2.0));
        }
    }
    return out;
}

struct PicardIterateSummary {
    int index = 0;
    double sup_delta = 0.0;
    double max_delta_b = 0.0;
    double max_delta_w = 0.0;
};

struct PicardResult {
    PicardIterate final;
    std::vector<PicardIterateSummary> history;
    bool converged = false;
};

/// Iterate the scheme until the sup-over-time delta norm falls below tol or
/// k_max is reached. Three consecutive delta increases are reported as a
/// diagnostic failure naming the dominant norm.
inline PicardResult picard_solve(const RunConfig& cfg, int k_max, double tol) {
    if (k_max < 1) throw validation_error("picard_solve: k_max must be >= 1");
    if (!(tol > 0.0)) throw validation_error("picard_solve: tol must be positive");

    PicardResult result;
    PicardIterate current = picard_seed();
    int rising = 0;
    double prev_sup = std::numeric_limits<double>::infinity();

    for (int k = 1; k <= k_max; ++k) {
        current = picard_step(current, cfg);
        PicardIterateSummary s;
        s.index = current.index;
        s.sup_delta = current.sup_delta();
        for (std::size_t i = 0; i < current.delta_b_wp.size(); ++i) {
            s.max_delta_b = std::max(s.max_delta_b, current.delta_b_wp[i]);
            s.max_delta_w = std::max(s.max_delta_w, current.delta_w_w2[i]);
        }
        result.history.push_back(s);

        if (k >= 2) {
            if (s.sup_delta > prev_sup) {
                if (++rising >= 3) {
                    const char* which =
                        s.max_delta_b > s.max_delta_w ? "weighted-Lp(delta b)" : "weighted-L2(delta w)";
                    throw numerical_error(
                        std::string("picard_solve: delta norms increased for 3 consecutive "
                                    "iterates (non-contraction in ") +
                        which + ", sup " + std::to_string(s.sup_delta) + ")");
                }
            } else {
                rising = 0;
            }
        }
        prev_sup = s.sup_delta;
        if (s.sup_delta < tol) {
            result.converged = true;
            break;
        }
    }
    result.final = std::move(current);
    return result;
}

}  // namespace oseenlab
