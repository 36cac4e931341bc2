#include <limits>

#include "doctest.h"
#include "oseenlab/initial.hpp"

using namespace oseenlab;

TEST_CASE("minimal config gets defaults") {
    RunConfig c = parse_config_text(R"({"alpha": 1.0, "epsilon": 0.01})");
    CHECK(c.alpha == 1.0);
    CHECK(c.epsilon == 0.01);
    CHECK(c.epsilon_b == 0.01);
    CHECK(c.n == 256);
    CHECK(c.half_length == 16.0);
    CHECK(c.dt == 0.0);  // auto-CFL
    CHECK(c.shape == PerturbationShape::gaussian_dipole);
}

TEST_CASE("config validation failures name the field") {
    CHECK_THROWS_WITH_AS(parse_config_text(R"({"alpha": 1.0, "epsilon": -1})"),
                         "config.epsilon: must be >= 0", validation_error);
    CHECK_THROWS_WITH_AS(parse_config_text(R"({"alpha": 1.0})"),
                         "config.epsilon: missing required key", validation_error);
    CHECK_THROWS_WITH_AS(parse_config_text(R"({"alpha": 1.0, "epsilon": 0.01, "typo": 3})"),
                         "config: unknown key 'typo'", validation_error);
    CHECK_THROWS_AS(parse_config_text(R"({"alpha": 1.0, "epsilon": 0.01, "n": 63})"),
                    validation_error);
    CHECK_THROWS_AS(parse_config_text(R"({"alpha": 1.0, "epsilon": 0.01, "pressure_tol": 1e-3})"),
                    validation_error);
    CHECK_THROWS_AS(parse_config_text("not json"), validation_error);
}

TEST_CASE("effective config round trip") {
    RunConfig c = parse_config_text(
        R"({"alpha": 2.0, "epsilon": 0.005, "n": 128, "seed": 42, "shape": "hermite-mode",
            "hermite_n1": 1, "hermite_n2": 0, "t_end": 2.5, "hyperviscosity": 1e-9})");
    RunConfig back = parse_config_text(effective_config_text(c));
    CHECK(back == c);
    CHECK(config_hash(back) == config_hash(c));
}

TEST_CASE("zero epsilon gives the unperturbed state") {
    RunConfig c = parse_config_text(R"({"alpha": 1.0, "epsilon": 0.0, "n": 64, "half_length": 12.0})");
    auto g = make_grid(c.n, c.half_length);
    PerturbationState s = make_initial_perturbation(c, g);
    CHECK(max_abs(s.w_tilde) == 0.0);
    CHECK(max_abs(s.b) == 0.0);
    CHECK(s.tau == 0.0);
}

TEST_CASE("gaussian dipole initial data meets the construction contract") {
    RunConfig c = parse_config_text(
        R"({"alpha": 1.0, "epsilon": 0.01, "n": 128, "half_length": 16.0})");
    auto g = make_grid(c.n, c.half_length);
    PerturbationState s = make_initial_perturbation(c, g);
    CHECK(std::abs(integrate(s.w_tilde)) <= 1e-12);
    CHECK(weighted_lp_norm(s.w_tilde, 2.0) == doctest::Approx(0.01).epsilon(1e-12));
    CHECK(weighted_lp_norm(s.b, 2.0) <= 0.01 * (1 + 1e-12));
    CHECK(weighted_lp_norm(s.b, std::numeric_limits<double>::infinity()) <= 0.01 * (1 + 1e-12));
    double min_density = 1e300;
    for (double v : s.b.values()) min_density = std::min(min_density, 1.0 + v);
    CHECK(min_density > 0.0);
}

TEST_CASE("hermite mode (1,0) is odd, so projection subtracts nothing") {
    RunConfig c = parse_config_text(
        R"({"alpha": 1.0, "epsilon": 0.01, "n": 128, "half_length": 16.0,
            "shape": "hermite-mode", "hermite_n1": 1, "hermite_n2": 0})");
    auto g = make_grid(c.n, c.half_length);
    PerturbationState s = make_initial_perturbation(c, g);

    // proportional to xi_1 G: compare against the normalized reference
    ScalarField ref = oseen_vorticity_profile(g);
    auto& rv = ref.mutable_values();
    for (int i1 = 0; i1 < g->n; ++i1)
        for (int i2 = 0; i2 < g->n; ++i2) rv[g->index(i1, i2)] *= g->coords[i1];
    apply_far_field_taper(ref);
    ref = (0.01 / weighted_lp_norm(ref, 2.0)) * ref;
    double err = 0.0;
    for (std::size_t i = 0; i < ref.size(); ++i)
        err = std::max(err, std::abs(std::abs(s.w_tilde.values()[i]) - std::abs(ref.values()[i])));
    CHECK(err <= 1e-12);
    CHECK(std::abs(integrate(s.w_tilde)) <= 1e-13);
}

TEST_CASE("hermite mode (0,0) is degenerate after projection") {
    RunConfig c = parse_config_text(
        R"({"alpha": 1.0, "epsilon": 0.01, "n": 64, "half_length": 16.0,
            "shape": "hermite-mode", "hermite_n1": 0, "hermite_n2": 0})");
    auto g = make_grid(c.n, c.half_length);
    CHECK_THROWS_AS(make_initial_perturbation(c, g), validation_error);
}

TEST_CASE("random-bandlimited initial data is deterministic in the seed") {
    RunConfig c = parse_config_text(
        R"({"alpha": 1.0, "epsilon": 0.01, "n": 64, "half_length": 12.0,
            "shape": "random-bandlimited", "seed": 9})");
    auto g = make_grid(c.n, c.half_length);
    PerturbationState a = make_initial_perturbation(c, g);
    PerturbationState b = make_initial_perturbation(c, g);
    double err = 0.0;
    for (std::size_t i = 0; i < a.w_tilde.size(); ++i) {
        err = std::max(err, std::abs(a.w_tilde.values()[i] - b.w_tilde.values()[i]));
        err = std::max(err, std::abs(a.b.values()[i] - b.b.values()[i]));
    }
    CHECK(err == 0.0);
    CHECK(std::abs(integrate(a.w_tilde)) <= 1e-12);
}
