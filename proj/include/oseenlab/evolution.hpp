#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "oseenlab/config.hpp"
#include "oseenlab/diagnostics_record.hpp"
#include "oseenlab/initial.hpp"
#include "oseenlab/pressure.hpp"
#include "oseenlab/taper.hpp"

namespace oseenlab {

struct StepOptions {
    double pressure_tol = 1e-10;
    double hyperviscosity = 0.0;  // nu_h of the optional -nu_h (-Lap)^4 b term
    double cfl = 0.5;
    bool drop_transport = false;  // disables (v_tilde . grad) w_tilde (linear subproblem)
};

/// Frozen advecting fields of the linearized (Picard) system, already
/// interpolated to the stage time. Null members fall back to the
/// self-consistent nonlinear coupling.
struct FrozenFields {
    const ScalarField* b_coefficient = nullptr;  // b_k in div(b_k (...)) and the pressure
    const ScalarField* w_advecting = nullptr;    // w_tilde_k defining the frozen velocity
};

/// Transport right-hand side of the density perturbation:
/// -((v - xi/2) . grad) b, plus the optional spectral hyperviscosity term.
inline ScalarField rhs_density(const ScalarField& b, const VectorField& v_total,
                               double hyperviscosity = 0.0) {
    const SpectralGrid& g = *b.grid();
    const ScalarField d1 = spectral_derivative(b, 1, 1);
    const ScalarField d2 = spectral_derivative(b, 2, 1);
    ScalarField r(b.grid());
    {
        auto& rv = r.mutable_values();
        const auto& vx = v_total.x.values();
        const auto& vy = v_total.y.values();
        for (int i1 = 0; i1 < g.n; ++i1)
            for (int i2 = 0; i2 < g.n; ++i2) {
                const std::size_t m = g.index(i1, i2);
                rv[m] = -((vx[m] - 0.5 * g.coords[i1]) * d1.values()[m] +
                          (vy[m] - 0.5 * g.coords[i2]) * d2.values()[m]);
            }
    }
    Spectrum s = r.spectrum();
    dealias_spectrum(s, g);
    if (hyperviscosity > 0.0) {
        const Spectrum& bs = b.spectrum();
        for (int j1 = 0; j1 < g.n; ++j1) {
            const double k1 = g.wavenumbers[j1];
            for (int j2 = 0; j2 < g.n; ++j2) {
                const double k2 = g.wavenumbers[j2];
                const double k_sq = k1 * k1 + k2 * k2;
                s[g.index(j1, j2)] -= hyperviscosity * std::pow(k_sq, 4.0) * bs[g.index(j1, j2)];
            }
        }
    }
    return ScalarField::from_spectrum(b.grid(), std::move(s));
}

namespace detail {

struct StageEval {
    Spectrum w_nondiffusive;  // spectrum of the w_tilde RHS without the Laplacian part
    ScalarField b_rhs;        // transport RHS of b (no hyperviscosity; handled by the factor)
    int pressure_iterations = 0;
    double boundary_mass = 0.0;
    double vmax = 0.0;
};

/// One evaluation of the coupled right-hand side at a stage state (b, w).
/// With `frozen` set this is the linearized system of the iteration scheme;
/// otherwise the self-consistent nonlinear system.
inline StageEval eval_stage(const ScalarField& b, const ScalarField& w, double alpha,
                            const StepOptions& opt, const FrozenFields* frozen) {
    const GridPtr& grid = b.grid();
    const SpectralGrid& g = *grid;
    const auto& prof = grid_profiles(grid);

    StageEval out;
    out.boundary_mass = boundary_ring_max(w);

    const ScalarField& w_adv = frozen && frozen->w_advecting ? *frozen->w_advecting : w;
    const ScalarField& b_coef = frozen && frozen->b_coefficient ? *frozen->b_coefficient : b;

    const VectorField v_tilde_adv = biot_savart(w_adv);
    VectorField v_total_adv = v_tilde_adv;
    {
        auto& vx = v_total_adv.x.mutable_values();
        auto& vy = v_total_adv.y.mutable_values();
        for (std::size_t i = 0; i < vx.size(); ++i) {
            vx[i] += alpha * prof.vG.x.values()[i];
            vy[i] += alpha * prof.vG.y.values()[i];
        }
    }
    out.vmax = max_abs(v_total_adv);

    out.b_rhs = rhs_density(b, v_total_adv, 0.0);

    // w_tilde equation, Laplacian part excluded (integrating factor covers it):
    //   (1/2 xi . grad + 1) w - alpha Lambda w - (v_tilde_adv . grad) w
    //   + div(b_coef (grad(alpha G + w) + perp grad Pi))
    const ScalarField d1 = spectral_derivative(w, 1, 1);
    const ScalarField d2 = spectral_derivative(w, 2, 1);
    // K_BS * w for the Lambda term; in the self-consistent case this is the
    // advecting velocity already computed
    std::optional<VectorField> vw_store;
    if (frozen && frozen->w_advecting) vw_store = biot_savart(w);
    const VectorField& vw = vw_store ? *vw_store : v_tilde_adv;

    ScalarField drift_products(grid);
    {
        auto& pv = drift_products.mutable_values();
        const auto& vgx = prof.vG.x.values();
        const auto& vgy = prof.vG.y.values();
        const auto& ggx = prof.grad_G.x.values();
        const auto& ggy = prof.grad_G.y.values();
        const auto& ax = v_tilde_adv.x.values();
        const auto& ay = v_tilde_adv.y.values();
        for (int i1 = 0; i1 < g.n; ++i1)
            for (int i2 = 0; i2 < g.n; ++i2) {
                const std::size_t m = g.index(i1, i2);
                // 1/2 xi . grad w
                double acc = 0.5 * (g.coords[i1] * d1.values()[m] + g.coords[i2] * d2.values()[m]);
                // -alpha Lambda w = -alpha (v^G . grad w + (K_BS*w) . grad G)
                acc -= alpha * (vgx[m] * d1.values()[m] + vgy[m] * d2.values()[m] +
                                vw.x.values()[m] * ggx[m] + vw.y.values()[m] * ggy[m]);
                // -(v_tilde_adv . grad) w
                if (!opt.drop_transport)
                    acc -= ax[m] * d1.values()[m] + ay[m] * d2.values()[m];
                pv[m] = acc;
            }
    }
    Spectrum n_w = drift_products.spectrum();
    dealias_spectrum(n_w, g);

    // + w (reaction part of the Fokker-Planck operator)
    {
        const Spectrum& ws = w.spectrum();
        for (std::size_t i = 0; i < n_w.size(); ++i) n_w[i] += ws[i];
    }

    // density coupling through the pressure; absent entirely when b_coef = 0
    if (max_abs(b_coef) > 0.0) {
        const VectorField F = pressure_rhs_linearized(b_coef, v_total_adv, alpha, w);
        PressureSolution pres = solve_pressure(b_coef, F, opt.pressure_tol);
        out.pressure_iterations = pres.iterations;

        VectorField flux(grid);
        {
            auto& qx = flux.x.mutable_values();
            auto& qy = flux.y.mutable_values();
            const auto& bv = b_coef.values();
            const auto& ggx = prof.grad_G.x.values();
            const auto& ggy = prof.grad_G.y.values();
            const auto& px = pres.grad_pi.x.values();
            const auto& py = pres.grad_pi.y.values();
            for (std::size_t i = 0; i < qx.size(); ++i) {
                // grad w + perp grad Pi with w = alpha G + w_tilde
                const double fx = alpha * ggx[i] + d1.values()[i] - py[i];
                const double fy = alpha * ggy[i] + d2.values()[i] + px[i];
                qx[i] = bv[i] * fx;
                qy[i] = bv[i] * fy;
            }
        }
        Spectrum qxs = flux.x.spectrum();
        Spectrum qys = flux.y.spectrum();
        dealias_spectrum(qxs, g);
        dealias_spectrum(qys, g);
        const int ny = g.n / 2;
        for (int j1 = 0; j1 < g.n; ++j1) {
            const double k1 = j1 == ny ? 0.0 : g.wavenumbers[j1];
            for (int j2 = 0; j2 < g.n; ++j2) {
                const double k2 = j2 == ny ? 0.0 : g.wavenumbers[j2];
                const std::size_t m = g.index(j1, j2);
                n_w[m] += std::complex<double>(0.0, 1.0) * (k1 * qxs[m] + k2 * qys[m]);
            }
        }
    }
    out.w_nondiffusive = std::move(n_w);
    return out;
}

inline void check_finite(const ScalarField& f, double tau, const char* name) {
    for (double v : f.values())
        if (!std::isfinite(v))
            throw numerical_error(std::string("non-finite ") + name + " at tau = " +
                                  std::to_string(tau) + "; last good state retained");
}

}  // namespace detail

/// Full vorticity right-hand side (Laplacian included), the spec'd operator
/// form. The time stepper uses the split version internally.
inline ScalarField rhs_vorticity(const PerturbationState& state, double alpha,
                                 const StepOptions& opt = {}) {
    detail::StageEval e = detail::eval_stage(state.b, state.w_tilde, alpha, opt, nullptr);
    Spectrum s = std::move(e.w_nondiffusive);
    const SpectralGrid& g = *state.grid();
    const Spectrum& ws = state.w_tilde.spectrum();
    for (int j1 = 0; j1 < g.n; ++j1) {
        const double k1 = g.wavenumbers[j1];
        for (int j2 = 0; j2 < g.n; ++j2) {
            const double k2 = g.wavenumbers[j2];
            const std::size_t m = g.index(j1, j2);
            s[m] -= (k1 * k1 + k2 * k2) * ws[m];
        }
    }
    return ScalarField::from_spectrum(state.grid(), std::move(s));
}

struct StepStats {
    int pressure_iterations = 0;  // first-stage count
    double boundary_w = 0.0;      // pre-taper boundary mass of the new w_tilde
    double boundary_b = 0.0;
    double vmax = 0.0;
    double cfl_margin = 0.0;  // allowed dt / actual dt
};

namespace detail {

struct IntegratingFactors {
    std::vector<double> half;  // e^{-|k|^2 dt/2} for w_tilde
    std::vector<double> full;
    std::vector<double> b_half;  // e^{-nu_h |k|^8 dt/2} for b (identity when off)
    std::vector<double> b_full;
    bool b_trivial = true;
};

inline IntegratingFactors make_factors(const SpectralGrid& g, double dt, double nu_h) {
    IntegratingFactors f;
    const std::size_t total = static_cast<std::size_t>(g.n) * g.n;
    f.half.resize(total);
    f.full.resize(total);
    f.b_trivial = nu_h <= 0.0;
    if (!f.b_trivial) {
        f.b_half.resize(total);
        f.b_full.resize(total);
    }
    for (int j1 = 0; j1 < g.n; ++j1) {
        const double k1 = g.wavenumbers[j1];
        for (int j2 = 0; j2 < g.n; ++j2) {
            const double k2 = g.wavenumbers[j2];
            const double k_sq = k1 * k1 + k2 * k2;
            const std::size_t m = g.index(j1, j2);
            f.half[m] = std::exp(-0.5 * dt * k_sq);
            f.full[m] = f.half[m] * f.half[m];
            if (!f.b_trivial) {
                f.b_half[m] = std::exp(-0.5 * dt * nu_h * std::pow(k_sq, 4.0));
                f.b_full[m] = f.b_half[m] * f.b_half[m];
            }
        }
    }
    return f;
}

inline Spectrum scaled(const Spectrum& s, const std::vector<double>& factor) {
    Spectrum r = s;
    for (std::size_t i = 0; i < r.size(); ++i) r[i] *= factor[i];
    return r;
}

}  // namespace detail

/// One Lawson (integrating factor) RK4 step of the coupled system. The heat
/// part of the Fokker-Planck operator is integrated exactly in Fourier space;
/// everything else is explicit. The hyperviscosity of b, when on, rides its
/// own integrating factor (it would be unconditionally unstable explicitly).
/// Afterwards the mean of w_tilde is re-projected and the far-field taper is
/// applied; the pre-taper boundary mass is reported.
///
/// `frozen_at`, when set, supplies the linearized system's frozen fields as a
/// function of stage time.
inline std::pair<PerturbationState, StepStats> step(
    const PerturbationState& state, double alpha, double dt, const StepOptions& opt = {},
    const std::function<FrozenFields(double)>& frozen_at = {}) {
    const GridPtr& grid = state.grid();
    const SpectralGrid& g = *grid;
    if (!(dt > 0.0)) throw validation_error("step: dt must be positive");

    const auto factors = detail::make_factors(g, dt, opt.hyperviscosity);
    const double h = dt;

    auto eval = [&](const ScalarField& b, const ScalarField& w, double stage_time,
                    detail::StageEval& out) {
        FrozenFields fr;
        if (frozen_at) fr = frozen_at(stage_time);
        out = detail::eval_stage(b, w, alpha, opt, frozen_at ? &fr : nullptr);
    };

    // stage 1 and the CFL check against the advecting velocity actually used
    detail::StageEval s1;
    eval(state.b, state.w_tilde, state.tau, s1);
    const double speed = std::max(s1.vmax, 0.5 * g.half_length);
    const double dt_allowed = opt.cfl * g.dx / speed;
    if (dt > dt_allowed * (1.0 + 1e-12))
        throw numerical_error("CFL violation: dt = " + std::to_string(dt) + " exceeds " +
                              std::to_string(dt_allowed) + " at tau = " + std::to_string(state.tau));

    const Spectrum& w0 = state.w_tilde.spectrum();
    const Spectrum& b0 = state.b.spectrum();
    const Spectrum n1w = std::move(s1.w_nondiffusive);
    const Spectrum n1b = s1.b_rhs.spectrum();

    auto stage_field = [&](const Spectrum& s) { return ScalarField::from_spectrum(grid, s); };

    // u_a = E_half (u_n + h/2 N1)
    Spectrum wa(w0.size());
    Spectrum ba(b0.size());
    for (std::size_t i = 0; i < wa.size(); ++i) {
        wa[i] = factors.half[i] * (w0[i] + 0.5 * h * n1w[i]);
        ba[i] = b0[i] + 0.5 * h * n1b[i];
        if (!factors.b_trivial) ba[i] *= factors.b_half[i];
    }
    detail::StageEval s2;
    eval(stage_field(ba), stage_field(wa), state.tau + 0.5 * h, s2);
    const Spectrum n2w = std::move(s2.w_nondiffusive);
    const Spectrum n2b = s2.b_rhs.spectrum();

    // u_b = E_half u_n + h/2 N2
    Spectrum wb(w0.size());
    Spectrum bb(b0.size());
    for (std::size_t i = 0; i < wb.size(); ++i) {
        wb[i] = factors.half[i] * w0[i] + 0.5 * h * n2w[i];
        bb[i] = (factors.b_trivial ? b0[i] : factors.b_half[i] * b0[i]) + 0.5 * h * n2b[i];
    }
    detail::StageEval s3;
    eval(stage_field(bb), stage_field(wb), state.tau + 0.5 * h, s3);
    const Spectrum n3w = std::move(s3.w_nondiffusive);
    const Spectrum n3b = s3.b_rhs.spectrum();

    // u_c = E_full u_n + h E_half N3
    Spectrum wc(w0.size());
    Spectrum bc(b0.size());
    for (std::size_t i = 0; i < wc.size(); ++i) {
        wc[i] = factors.full[i] * w0[i] + h * factors.half[i] * n3w[i];
        bc[i] = factors.b_trivial ? b0[i] + h * n3b[i]
                                  : factors.b_full[i] * b0[i] + h * factors.b_half[i] * n3b[i];
    }
    detail::StageEval s4;
    eval(stage_field(bc), stage_field(wc), state.tau + h, s4);
    const Spectrum n4w = std::move(s4.w_nondiffusive);
    const Spectrum n4b = s4.b_rhs.spectrum();

    Spectrum w_new(w0.size());
    Spectrum b_new(b0.size());
    for (std::size_t i = 0; i < w_new.size(); ++i) {
        w_new[i] = factors.full[i] * w0[i] +
                   (h / 6.0) * (factors.full[i] * n1w[i] +
                                2.0 * factors.half[i] * (n2w[i] + n3w[i]) + n4w[i]);
        if (factors.b_trivial) {
            b_new[i] = b0[i] + (h / 6.0) * (n1b[i] + 2.0 * (n2b[i] + n3b[i]) + n4b[i]);
        } else {
            b_new[i] = factors.b_full[i] * b0[i] +
                       (h / 6.0) * (factors.b_full[i] * n1b[i] +
                                    2.0 * factors.b_half[i] * (n2b[i] + n3b[i]) + n4b[i]);
        }
    }

    PerturbationState next{ScalarField::from_spectrum(grid, std::move(b_new)),
                           ScalarField::from_spectrum(grid, std::move(w_new)), state.tau + dt};

    StepStats stats;
    stats.pressure_iterations = s1.pressure_iterations;
    stats.vmax = s1.vmax;
    stats.cfl_margin = dt_allowed / dt;
    stats.boundary_w = boundary_ring_max(next.w_tilde);
    stats.boundary_b = boundary_ring_max(next.b);

    detail::check_finite(next.w_tilde, next.tau, "vorticity perturbation");
    detail::check_finite(next.b, next.tau, "density perturbation");

    // taper first: the projection then compensates whatever mass the mask
    // removed, so the per-step mean drift is pure quadrature roundoff
    apply_far_field_taper(next.w_tilde);
    apply_far_field_taper(next.b);
    next.w_tilde = project_mean_zero(next.w_tilde);
    return {std::move(next), stats};
}

struct SimulationResult {
    PerturbationState state;
    std::vector<DiagnosticsRecord> series;
    int steps = 0;
};

/// Thrown when a run dies mid-flight; carries everything produced so far so
/// the caller can persist partial results.
struct simulation_aborted : numerical_error {
    simulation_aborted(const std::string& what, SimulationResult partial_)
        : numerical_error(what), partial(std::move(partial_)) {}
    SimulationResult partial;
};

using RecordCallback = std::function<void(const DiagnosticsRecord&, const PerturbationState&)>;
using CheckpointCallback = std::function<void(const PerturbationState&)>;

inline double auto_time_step(const RunConfig& cfg, const GridPtr& grid,
                             const PerturbationState& initial) {
    if (cfg.dt > 0.0) return cfg.dt;
    const double v0 = max_abs(velocity_total(cfg.alpha, initial.w_tilde));
    const double speed = std::max(v0, 0.5 * grid->half_length);
    return cfg.cfl * grid->dx / speed;
}

/// March the perturbation system from the given state to t_end, emitting
/// diagnostics every output_every steps (plus the first and final states).
/// Deterministic for a fixed config. Numerical failures raise
/// simulation_aborted with the partial series and the last good state.
inline SimulationResult simulate_from(PerturbationState initial, const RunConfig& cfg,
                                      const RecordCallback& on_record = {},
                                      const CheckpointCallback& on_checkpoint = {}) {
    SimulationResult result{std::move(initial), {}, 0};

    StepOptions opt;
    opt.pressure_tol = cfg.pressure_tol;
    opt.hyperviscosity = cfg.hyperviscosity;
    opt.cfl = cfg.cfl;
    opt.drop_transport = cfg.drop_transport;

    const double dt = auto_time_step(cfg, result.state.grid(), result.state);

    auto emit = [&](const StepStats& stats) {
        DiagnosticsRecord r =
            collect_diagnostics(result.state, cfg.sobolev_s, stats.pressure_iterations,
                                stats.boundary_w, stats.boundary_b, stats.cfl_margin);
        result.series.push_back(r);
        if (on_record) on_record(r, result.state);
    };

    emit(StepStats{});
    if (cfg.t_end <= 0.0) return result;

    const double t_end = cfg.t_end;
    int k = 0;
    while (result.state.tau < t_end - 1e-12) {
        const double h = std::min(dt, t_end - result.state.tau);
        try {
            auto [next, stats] = step(result.state, cfg.alpha, h, opt);
            result.state = std::move(next);
            result.steps = ++k;
            const bool last = result.state.tau >= t_end - 1e-12;
            if (k % cfg.output_every == 0 || last) emit(stats);
            if (cfg.checkpoint_every > 0 && (k % cfg.checkpoint_every == 0 || last) && on_checkpoint)
                on_checkpoint(result.state);
        } catch (const numerical_error& e) {
            throw simulation_aborted(e.what(), std::move(result));
        }
    }
    return result;
}

/// Fresh run from the configured initial perturbation at tau = 0.
inline SimulationResult simulate(const RunConfig& cfg, const RecordCallback& on_record = {},
                                 const CheckpointCallback& on_checkpoint = {}) {
    auto grid = make_grid(cfg.n, cfg.half_length);
    return simulate_from(make_initial_perturbation(cfg, grid), cfg, on_record, on_checkpoint);
}

/// Original-variable fields at physical time t = e^tau on the rescaled grid
/// x = sqrt(t) xi: rho = 1/(1+b), omega = w/t, u = v/sqrt(t).
struct PhysicalFields {
    double t = 1.0;
    ScalarField rho;
    ScalarField omega;
    VectorField u;
};

inline PhysicalFields self_similar_to_physical(const PerturbationState& state, double alpha) {
    const GridPtr& grid = state.grid();
    const double t = std::exp(state.tau);
    const double root_t = std::sqrt(t);
    auto physical_grid = make_grid(grid->n, root_t * grid->half_length);

    PhysicalFields out{t, ScalarField(physical_grid), ScalarField(physical_grid),
                       VectorField(physical_grid)};
    const auto& prof = detail::grid_profiles(grid);
    const VectorField v = velocity_total(alpha, state.w_tilde);
    auto& rho = out.rho.mutable_values();
    auto& omega = out.omega.mutable_values();
    auto& ux = out.u.x.mutable_values();
    auto& uy = out.u.y.mutable_values();
    for (std::size_t i = 0; i < rho.size(); ++i) {
        rho[i] = 1.0 / (1.0 + state.b.values()[i]);
        omega[i] = (alpha * prof.G.values()[i] + state.w_tilde.values()[i]) / t;
        ux[i] = v.x.values()[i] / root_t;
        uy[i] = v.y.values()[i] / root_t;
    }
    return out;
}

}  // namespace oseenlab
