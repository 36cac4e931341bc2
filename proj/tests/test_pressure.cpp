#include <cmath>
#include <random>

#include "doctest.h"
#include "oseenlab/pressure.hpp"
#include "oseenlab/random_fields.hpp"

using namespace oseenlab;

namespace {

double vec_l2(const VectorField& v) {
    return std::sqrt(std::pow(lp_norm(v.x, 2.0), 2) + std::pow(lp_norm(v.y, 2.0), 2));
}

double vec_max_diff(const VectorField& a, const VectorField& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.x.size(); ++i) {
        m = std::max(m, std::abs(a.x.values()[i] - b.x.values()[i]));
        m = std::max(m, std::abs(a.y.values()[i] - b.y.values()[i]));
    }
    return m;
}

VectorField random_vector(const GridPtr& g, std::mt19937_64& rng, double band) {
    return VectorField(random_gaussian_enveloped(g, rng, band),
                       random_gaussian_enveloped(g, rng, band));
}

ScalarField scaled_to_inf(const ScalarField& f, double target) {
    return (target / max_abs(f)) * f;
}

}  // namespace

TEST_CASE("Leray Q annihilates divergence-free fields and fixes gradients") {
    auto g = make_grid(64, 8.0);
    std::mt19937_64 rng(3);
    // dealias the potentials: the identity is stated on the kept band, where
    // the unpaired Nyquist sign ambiguity never enters
    ScalarField phi = dealias(random_gaussian_enveloped(g, rng, 2.0));
    ScalarField psi = dealias(random_gaussian_enveloped(g, rng, 2.0));

    VectorField divfree = perp_gradient(psi);
    CHECK(vec_l2(leray_Q(divfree)) <= 1e-12 * vec_l2(divfree));

    VectorField grad = gradient(phi);
    CHECK(vec_max_diff(leray_Q(grad), grad) <= 1e-12 * max_abs(grad));

    VectorField F = random_vector(g, rng, 2.0);
    VectorField q = leray_Q(F);
    CHECK(vec_max_diff(leray_Q(q), q) <= 1e-12 * std::max(1.0, max_abs(q)));
}

TEST_CASE("pressure_rhs vanishes on the trivial state") {
    auto g = make_grid(64, 8.0);
    ScalarField zero(g);
    VectorField v0(g);
    VectorField F = pressure_rhs(zero, v0, 0.0, zero);
    CHECK(max_abs(F) == 0.0);
}

TEST_CASE("pressure_rhs of the pure Oseen vortex self-converges") {
    // b = 0, w_tilde = 0, alpha = 1: F = Laplacian v^G - (v^G . grad) v^G,
    // whose gradient part must agree between n = 128 and n = 256.
    double norms[2];
    int i = 0;
    for (int n : {128, 256}) {
        auto g = make_grid(n, 16.0);
        ScalarField zero(g);
        VectorField vG = velocity_total(1.0, zero);
        VectorField F = pressure_rhs(zero, vG, 1.0, zero);
        norms[i++] = vec_l2(leray_Q(F));
    }
    CHECK(std::abs(norms[0] - norms[1]) <= 1e-6 * norms[1]);
}

TEST_CASE("pressure_rhs is affine in b") {
    auto g = make_grid(64, 8.0);
    std::mt19937_64 rng(5);
    ScalarField w = random_mean_zero_field(g, rng, 1.5);
    ScalarField b = scaled_to_inf(random_gaussian_enveloped(g, rng, 1.5), 0.3);
    VectorField v = velocity_total(1.0, w);

    VectorField with_b = pressure_rhs(b, v, 1.0, w);
    VectorField without = pressure_rhs(ScalarField(g), v, 1.0, w);

    // difference must equal the dealiased product b * Laplacian(v)
    VectorField lap_v = perp_gradient(w);
    const auto& prof = detail::grid_profiles(g);
    lap_v = lap_v + 1.0 * prof.perp_grad_G;
    VectorField expected(dealiased_product(b, lap_v.x), dealiased_product(b, lap_v.y));
    VectorField got = with_b - without;
    CHECK(vec_max_diff(got, expected) <= 1e-12 * std::max(1.0, max_abs(expected)));
}

TEST_CASE("solve_pressure with b = 0 returns QF in one iteration") {
    auto g = make_grid(64, 8.0);
    std::mt19937_64 rng(7);
    VectorField F = random_vector(g, rng, 2.0);
    PressureSolution sol = solve_pressure(ScalarField(g), F, 1e-10);
    CHECK(sol.iterations == 1);
    VectorField q = leray_Q(F);
    CHECK(vec_max_diff(sol.grad_pi, q) <= 1e-14 * std::max(1.0, max_abs(q)));
}

TEST_CASE("solve_pressure constant-b geometric series") {
    auto g = make_grid(64, 8.0);
    std::mt19937_64 rng(11);
    VectorField F = random_vector(g, rng, 1.5);
    const double tol = 1e-10;
    for (double c : {0.3, 0.5, -0.4}) {
        ScalarField b(g);
        for (auto& v : b.mutable_values()) v = c;
        PressureSolution sol = solve_pressure(b, F, tol);
        VectorField expected = (1.0 / (1.0 + c)) * leray_Q(F);
        const double err = vec_l2(sol.grad_pi - expected);
        CHECK(err <= tol * vec_l2(F));

        const double f_norm = vec_l2(F);
        const double q_norm = vec_l2(leray_Q(F));
        const int predicted = static_cast<int>(
            std::ceil(std::log(tol * f_norm / q_norm) / std::log(std::abs(c))));
        CHECK(std::abs(sol.iterations - predicted) <= 2);
    }
}

TEST_CASE("solve_pressure rejects contraction violations") {
    auto g = make_grid(32, 8.0);
    std::mt19937_64 rng(13);
    VectorField F = random_vector(g, rng, 1.5);
    ScalarField b(g);
    for (auto& v : b.mutable_values()) v = 1.01;
    CHECK_THROWS_WITH_AS(solve_pressure(b, F, 1e-10), "contraction condition violated",
                         validation_error);
}

TEST_CASE("solve_pressure recovers a manufactured solution") {
    auto g = make_grid(128, 16.0);
    std::mt19937_64 rng(17);
    ScalarField phi = random_gaussian_enveloped(g, rng, 1.5);
    VectorField grad_pi_exact = gradient(phi);
    ScalarField b = scaled_to_inf(random_gaussian_enveloped(g, rng, 1.5), 0.3);
    ScalarField psi = random_gaussian_enveloped(g, rng, 1.5);

    // F = (1+b) grad Pi* + div-free field
    VectorField F = perp_gradient(psi);
    {
        auto& fx = F.x.mutable_values();
        auto& fy = F.y.mutable_values();
        for (std::size_t i = 0; i < fx.size(); ++i) {
            fx[i] += (1.0 + b.values()[i]) * grad_pi_exact.x.values()[i];
            fy[i] += (1.0 + b.values()[i]) * grad_pi_exact.y.values()[i];
        }
    }
    const double tol = 1e-10;
    PressureSolution sol = solve_pressure(b, F, tol);
    CHECK(vec_l2(sol.grad_pi - grad_pi_exact) <= 10.0 * tol * vec_l2(F));

    // residual contract: div((1+b) grad Pi - F) small in L2
    VectorField flux(g);
    {
        auto& fx = flux.x.mutable_values();
        auto& fy = flux.y.mutable_values();
        for (std::size_t i = 0; i < fx.size(); ++i) {
            fx[i] = (1.0 + b.values()[i]) * sol.grad_pi.x.values()[i] - F.x.values()[i];
            fy[i] = (1.0 + b.values()[i]) * sol.grad_pi.y.values()[i] - F.y.values()[i];
        }
    }
    CHECK(lp_norm(divergence(flux), 2.0) <= 2.0 * tol * vec_l2(F));
}

TEST_CASE("pressure difference ratio is finite (shared F, two coefficients)") {
    auto g = make_grid(64, 8.0);
    std::mt19937_64 rng(19);
    double worst = 0.0;
    for (int i = 0; i < 8; ++i) {
        ScalarField b1 = scaled_to_inf(random_gaussian_enveloped(g, rng, 1.5), 0.3);
        ScalarField b2 = scaled_to_inf(random_gaussian_enveloped(g, rng, 1.5), 0.3);
        VectorField F = random_vector(g, rng, 1.5);
        VectorField d = solve_pressure(b2, F, 1e-10).grad_pi - solve_pressure(b1, F, 1e-10).grad_pi;
        const double num = vec_l2(d);
        const double den = lp_norm(b2 - b1, 4.0) *
                           std::sqrt(std::pow(lp_norm(F.x, 4.0), 2) + std::pow(lp_norm(F.y, 4.0), 2));
        REQUIRE(den > 0.0);
        worst = std::max(worst, num / den);
    }
    CHECK(std::isfinite(worst));
    MESSAGE("pressure difference max ratio: ", worst);
}

TEST_CASE("potential recovers from its gradient") {
    auto g = make_grid(64, 8.0);
    std::mt19937_64 rng(23);
    ScalarField phi = dealias(random_gaussian_enveloped(g, rng, 2.0));
    // remove the DC mode entirely: potential_from_gradient fixes mean to 0
    Spectrum s = phi.spectrum();
    s[0] = 0.0;
    phi = ScalarField::from_spectrum(g, std::move(s));
    ScalarField back = potential_from_gradient(gradient(phi));
    double err = 0.0;
    for (std::size_t i = 0; i < phi.size(); ++i)
        err = std::max(err, std::abs(phi.values()[i] - back.values()[i]));
    CHECK(err <= 1e-12 * std::max(1.0, max_abs(phi)));
}
