#pragma once

#include <cmath>
#include <string>

#include "oseenlab/operators.hpp"
#include "oseenlab/spectral_ops.hpp"

namespace oseenlab {

/// Gradient part of the Helmholtz decomposition: Q = I - P with P the Leray
/// projector. QF_hat = kappa (kappa . F_hat) / |kappa|^2, zero at kappa = 0.
inline VectorField leray_Q(const VectorField& F) {
    const SpectralGrid& g = *F.grid();
    const Spectrum& sx = F.x.spectrum();
    const Spectrum& sy = F.y.spectrum();
    Spectrum qx(sx.size()), qy(sy.size());
    const int ny = g.n / 2;
    for (int j1 = 0; j1 < g.n; ++j1) {
        const double k1 = g.wavenumbers[j1];
        for (int j2 = 0; j2 < g.n; ++j2) {
            const double k2 = g.wavenumbers[j2];
            const std::size_t m = g.index(j1, j2);
            const double k_sq = k1 * k1 + k2 * k2;
            if (k_sq == 0.0 || j1 == ny || j2 == ny) {
                qx[m] = qy[m] = 0.0;
                continue;
            }
            const std::complex<double> proj = (k1 * sx[m] + k2 * sy[m]) / k_sq;
            qx[m] = k1 * proj;
            qy[m] = k2 * proj;
        }
    }
    return VectorField(ScalarField::from_spectrum(F.grid(), std::move(qx)),
                       ScalarField::from_spectrum(F.grid(), std::move(qy)));
}

/// Pressure right-hand side of the linearized system:
/// F = (1+b) Laplacian(v_advected) - (v_advecting . grad) v_advected with
/// v = alpha v^G + v_tilde. The profile pieces use closed forms:
/// Laplacian v = perp-grad(curl v) for divergence-free v, so
/// Laplacian(alpha v^G) = alpha perp-grad G, and grad v^G is the analytic
/// Jacobian (the 1/|xi| velocity tail is not spectrally differentiable).
inline VectorField pressure_rhs_linearized(const ScalarField& b, const VectorField& v_advecting,
                                           double alpha, const ScalarField& w_tilde_advected) {
    const GridPtr& grid = b.grid();
    const SpectralGrid& g = *grid;
    const auto& prof = detail::grid_profiles(grid);

    // Laplacian of the advected velocity: alpha perp-grad G + perp-grad w_tilde
    VectorField lap_v = perp_gradient(w_tilde_advected);
    {
        auto& lx = lap_v.x.mutable_values();
        auto& ly = lap_v.y.mutable_values();
        const auto& px = prof.perp_grad_G.x.values();
        const auto& py = prof.perp_grad_G.y.values();
        for (std::size_t i = 0; i < lx.size(); ++i) {
            lx[i] += alpha * px[i];
            ly[i] += alpha * py[i];
        }
    }

    // Jacobian of the advected velocity: alpha * (analytic v^G Jacobian)
    // plus the spectral Jacobian of the Biot-Savart perturbation velocity.
    const VectorField v_tilde = biot_savart(w_tilde_advected);
    const ScalarField d1x = spectral_derivative(v_tilde.x, 1, 1);
    const ScalarField d2x = spectral_derivative(v_tilde.x, 2, 1);
    const ScalarField d1y = spectral_derivative(v_tilde.y, 1, 1);
    const ScalarField d2y = spectral_derivative(v_tilde.y, 2, 1);
    const VelocityJacobian& J = prof.vG_jacobian;

    VectorField F(grid);
    {
        auto& fx = F.x.mutable_values();
        auto& fy = F.y.mutable_values();
        const auto& bx = b.values();
        const auto& ax = v_advecting.x.values();
        const auto& ay = v_advecting.y.values();
        for (std::size_t i = 0; i < fx.size(); ++i) {
            const double one_b = 1.0 + bx[i];
            const double adv_x =
                ax[i] * (alpha * J.d1x.values()[i] + d1x.values()[i]) +
                ay[i] * (alpha * J.d2x.values()[i] + d2x.values()[i]);
            const double adv_y =
                ax[i] * (alpha * J.d1y.values()[i] + d1y.values()[i]) +
                ay[i] * (alpha * J.d2y.values()[i] + d2y.values()[i]);
            fx[i] = one_b * lap_v.x.values()[i] - adv_x;
            fy[i] = one_b * lap_v.y.values()[i] - adv_y;
        }
    }
    Spectrum sx = F.x.spectrum();
    Spectrum sy = F.y.spectrum();
    dealias_spectrum(sx, g);
    dealias_spectrum(sy, g);
    return VectorField(ScalarField::from_spectrum(grid, std::move(sx)),
                       ScalarField::from_spectrum(grid, std::move(sy)));
}

/// F = (1+b) Laplacian v - (v . grad) v for the self-advected system.
inline VectorField pressure_rhs(const ScalarField& b, const VectorField& v_total, double alpha,
                                const ScalarField& w_tilde) {
    return pressure_rhs_linearized(b, v_total, alpha, w_tilde);
}

struct PressureSolution {
    VectorField grad_pi;
    int iterations = 0;
    double residual = 0.0;
};

/// Solve div((1+b) grad Pi) = div F by the Leray fixed point
/// grad Pi_{k+1} = Q(F - b grad Pi_k), grad Pi_0 = QF. In L^2 the projector
/// norm is exactly 1, so the iteration contracts whenever |b|_inf < 1.
inline PressureSolution solve_pressure(const ScalarField& b, const VectorField& F, double tol) {
    if (!(tol > 0.0)) throw validation_error("solve_pressure: tol must be positive");
    const double b_inf = max_abs(b);
    if (b_inf >= 1.0) throw validation_error("contraction condition violated");

    const double f_norm = std::sqrt(std::pow(lp_norm(F.x, 2.0), 2) + std::pow(lp_norm(F.y, 2.0), 2));
    PressureSolution sol;
    sol.grad_pi = leray_Q(F);
    if (f_norm == 0.0) return sol;

    const int max_iter =
        b_inf < 1e-14 ? 2 : 10 * static_cast<int>(std::ceil(std::log(tol) / std::log(b_inf))) + 2;

    for (int k = 0; k < max_iter; ++k) {
        VectorField corrected(F.grid());
        {
            auto& cx = corrected.x.mutable_values();
            auto& cy = corrected.y.mutable_values();
            const auto& bx = b.values();
            const auto& fx = F.x.values();
            const auto& fy = F.y.values();
            const auto& gx = sol.grad_pi.x.values();
            const auto& gy = sol.grad_pi.y.values();
            for (std::size_t i = 0; i < cx.size(); ++i) {
                cx[i] = fx[i] - bx[i] * gx[i];
                cy[i] = fy[i] - bx[i] * gy[i];
            }
        }
        VectorField next = leray_Q(corrected);
        const VectorField update = next - sol.grad_pi;
        const double res =
            std::sqrt(std::pow(lp_norm(update.x, 2.0), 2) + std::pow(lp_norm(update.y, 2.0), 2));
        sol.grad_pi = std::move(next);
        sol.iterations = k + 1;
        sol.residual = res;
        if (res <= tol * f_norm) return sol;
    }
    throw numerical_error("solve_pressure: no convergence after " + std::to_string(max_iter) +
                          " iterations (residual " + std::to_string(sol.residual) + ", |b|_inf " +
                          std::to_string(b_inf) + ")");
}

/// Recover Pi from its gradient by the spectral antigradient, mean fixed to 0.
inline ScalarField potential_from_gradient(const VectorField& grad) {
    const SpectralGrid& g = *grad.grid();
    const Spectrum& sx = grad.x.spectrum();
    const Spectrum& sy = grad.y.spectrum();
    Spectrum out(sx.size(), 0.0);
    for (int j1 = 0; j1 < g.n; ++j1) {
        const double k1 = g.wavenumbers[j1];
        for (int j2 = 0; j2 < g.n; ++j2) {
            const double k2 = g.wavenumbers[j2];
            const double k_sq = k1 * k1 + k2 * k2;
            if (k_sq == 0.0) continue;
            const std::size_t m = g.index(j1, j2);
            // grad_hat = i kappa Pi_hat  =>  Pi_hat = -i (kappa . grad_hat)/|kappa|^2
            out[m] = std::complex<double>(0.0, -1.0) * (k1 * sx[m] + k2 * sy[m]) / k_sq;
        }
    }
    return ScalarField::from_spectrum(grad.grid(), std::move(out));
}

}  // namespace oseenlab
