#pragma once

#include <cmath>
#include <numbers>

#include "oseenlab/field.hpp"

namespace oseenlab {

namespace detail {

/// Radial factor of the Oseen velocity: v^G = g(|xi|^2) xi_perp with
/// g(u) = (1 - e^{-u/4}) / (2 pi u), finite at u = 0.
inline double oseen_radial_factor(double u) {
    constexpr double inv_2pi = 1.0 / (2.0 * std::numbers::pi);
    if (u < 1e-4) {
        // series of (1 - e^{-u/4})/u
        return inv_2pi * (0.25 - u / 32.0 + u * u / 384.0);
    }
    return inv_2pi * (-std::expm1(-u / 4.0)) / u;
}

/// d/du of the radial factor.
inline double oseen_radial_factor_prime(double u) {
    constexpr double inv_2pi = 1.0 / (2.0 * std::numbers::pi);
    if (u < 1e-4) {
        return inv_2pi * (-1.0 / 32.0 + u / 192.0);
    }
    const double e = std::exp(-u / 4.0);
    return inv_2pi * ((u / 4.0 + 1.0) * e - 1.0) / (u * u);
}

}  // namespace detail

inline double gaussian_vortex_value(double x, double y) {
    return std::exp(-(x * x + y * y) / 4.0) / (4.0 * std::numbers::pi);
}

/// G(xi) = e^{-|xi|^2/4} / (4 pi).
inline ScalarField oseen_vorticity_profile(const GridPtr& grid) {
    ScalarField f(grid);
    auto& v = f.mutable_values();
    for (int i1 = 0; i1 < grid->n; ++i1)
        for (int i2 = 0; i2 < grid->n; ++i2)
            v[grid->index(i1, i2)] = gaussian_vortex_value(grid->coords[i1], grid->coords[i2]);
    return f;
}

/// G^{1/2}(xi) = e^{-|xi|^2/8} / sqrt(4 pi).
inline ScalarField gaussian_sqrt_profile(const GridPtr& grid) {
    const double a = 1.0 / std::sqrt(4.0 * std::numbers::pi);
    ScalarField f(grid);
    auto& v = f.mutable_values();
    for (int i1 = 0; i1 < grid->n; ++i1)
        for (int i2 = 0; i2 < grid->n; ++i2) {
            const double x = grid->coords[i1];
            const double y = grid->coords[i2];
            v[grid->index(i1, i2)] = a * std::exp(-(x * x + y * y) / 8.0);
        }
    return f;
}

/// v^G(xi) = xi_perp (1 - e^{-|xi|^2/4}) / (2 pi |xi|^2), with v^G(0) = 0.
inline VectorField oseen_velocity_profile(const GridPtr& grid) {
    VectorField f(grid);
    auto& vx = f.x.mutable_values();
    auto& vy = f.y.mutable_values();
    for (int i1 = 0; i1 < grid->n; ++i1)
        for (int i2 = 0; i2 < grid->n; ++i2) {
            const double x = grid->coords[i1];
            const double y = grid->coords[i2];
            const double g = detail::oseen_radial_factor(x * x + y * y);
            const std::size_t m = grid->index(i1, i2);
            vx[m] = -y * g;
            vy[m] = x * g;
        }
    return f;
}

/// Closed-form Jacobian of v^G. The velocity tail decays like 1/|xi| and is
/// not periodic, so its derivatives are sampled analytically rather than
/// differentiated spectrally.
struct VelocityJacobian {
    ScalarField d1x, d2x;  // derivatives of the first component
    ScalarField d1y, d2y;  // derivatives of the second component
};

inline VelocityJacobian oseen_velocity_jacobian(const GridPtr& grid) {
    VelocityJacobian J{ScalarField(grid), ScalarField(grid), ScalarField(grid), ScalarField(grid)};
    auto& a = J.d1x.mutable_values();
    auto& b = J.d2x.mutable_values();
    auto& c = J.d1y.mutable_values();
    auto& d = J.d2y.mutable_values();
    for (int i1 = 0; i1 < grid->n; ++i1)
        for (int i2 = 0; i2 < grid->n; ++i2) {
            const double x = grid->coords[i1];
            const double y = grid->coords[i2];
            const double u = x * x + y * y;
            const double g = detail::oseen_radial_factor(u);
            const double gp = detail::oseen_radial_factor_prime(u);
            const std::size_t m = grid->index(i1, i2);
            a[m] = -2.0 * x * y * gp;          // d1 (-y g)
            b[m] = -2.0 * y * y * gp - g;      // d2 (-y g)
            c[m] = 2.0 * x * x * gp + g;       // d1 (x g)
            d[m] = 2.0 * x * y * gp;           // d2 (x g)
        }
    return J;
}

/// grad G = -(xi/2) G, sampled in closed form.
inline VectorField gaussian_vortex_gradient(const GridPtr& grid) {
    VectorField f(grid);
    auto& vx = f.x.mutable_values();
    auto& vy = f.y.mutable_values();
    for (int i1 = 0; i1 < grid->n; ++i1)
        for (int i2 = 0; i2 < grid->n; ++i2) {
            const double x = grid->coords[i1];
            const double y = grid->coords[i2];
            const double g = gaussian_vortex_value(x, y);
            const std::size_t m = grid->index(i1, i2);
            vx[m] = -0.5 * x * g;
            vy[m] = -0.5 * y * g;
        }
    return f;
}

/// perp-grad G = -(xi_perp/2) G; equals the vector Laplacian of v^G.
inline VectorField gaussian_vortex_perp_gradient(const GridPtr& grid) {
    VectorField f(grid);
    auto& vx = f.x.mutable_values();
    auto& vy = f.y.mutable_values();
    for (int i1 = 0; i1 < grid->n; ++i1)
        for (int i2 = 0; i2 < grid->n; ++i2) {
            const double x = grid->coords[i1];
            const double y = grid->coords[i2];
            const double g = gaussian_vortex_value(x, y);
            const std::size_t m = grid->index(i1, i2);
            vx[m] = 0.5 * y * g;
            vy[m] = -0.5 * x * g;
        }
    return f;
}

}  // namespace oseenlab
