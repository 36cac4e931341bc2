#include <cmath>
#include <random>

#include "doctest.h"
#include "oseenlab/diagnostics.hpp"
#include "oseenlab/evolution.hpp"

using namespace oseenlab;

TEST_CASE("mean_vorticity examples") {
    auto g = make_grid(128, 16.0);
    ScalarField G = oseen_vorticity_profile(g);
    CHECK(mean_vorticity(G) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(std::abs(mean_vorticity(project_mean_zero(G))) < 1e-12);

    ScalarField odd = G;
    auto& v = odd.mutable_values();
    for (int i1 = 0; i1 < g->n; ++i1)
        for (int i2 = 0; i2 < g->n; ++i2) v[g->index(i1, i2)] *= g->coords[i1];
    CHECK(std::abs(mean_vorticity(odd)) < 1e-14);
}

TEST_CASE("decay_fit on synthetic series") {
    std::vector<std::pair<double, double>> exact;
    for (int i = 0; i <= 60; ++i) {
        const double tau = 0.1 * i;
        exact.emplace_back(tau, 3.0 * std::exp(-0.45 * tau));
    }
    DecayFit f = decay_fit(exact, 0.0, 6.0);
    CHECK(f.gamma_hat == doctest::Approx(0.45).epsilon(1e-10));
    CHECK(f.amplitude == doctest::Approx(3.0).epsilon(1e-10));
    CHECK(f.r_squared == doctest::Approx(1.0).epsilon(1e-12));

    std::vector<std::pair<double, double>> wobble;
    for (int i = 0; i <= 250; ++i) {
        const double tau = 0.05 * i;
        wobble.emplace_back(tau, std::exp(-0.5 * tau) * (1.0 + 0.1 * std::sin(tau)));
    }
    DecayFit w = decay_fit(wobble, 0.0, 12.5);
    CHECK(std::abs(w.gamma_hat - 0.5) < 0.03);
    CHECK(w.r_squared > 0.99);

    std::vector<std::pair<double, double>> flat;
    for (int i = 0; i <= 30; ++i) flat.emplace_back(0.2 * i, 2.0);
    DecayFit c = decay_fit(flat, 0.0, 6.0);
    CHECK(std::abs(c.gamma_hat) < 1e-12);
}

TEST_CASE("decay_fit rejections") {
    std::vector<std::pair<double, double>> few = {{0.0, 1.0}, {0.5, 0.5}};
    CHECK_THROWS_AS(decay_fit(few, 0.0, 1.0), validation_error);

    std::vector<std::pair<double, double>> bad;
    for (int i = 0; i < 20; ++i) bad.emplace_back(0.1 * i, i == 7 ? -1.0 : 1.0);
    CHECK_THROWS_AS(decay_fit(bad, 0.0, 2.0), validation_error);
}

TEST_CASE("oscillator spectrum at modest resolution") {
    auto g = make_grid(64, 16.0);
    std::vector<EigenPair> pairs = oscillator_eigenpairs(g, 3, 1e-8);
    REQUIRE(pairs.size() == 3);
    CHECK(std::abs(pairs[0].value - 0.0) < 1e-6);
    CHECK(std::abs(pairs[1].value - 0.5) < 1e-6);
    CHECK(std::abs(pairs[2].value - 0.5) < 1e-6);

    // ground eigenvector matches G^{1/2} (cosine similarity)
    ScalarField ground = gaussian_sqrt_profile(g);
    const double cell = g->cell_area();
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < ground.size(); ++i) {
        dot += pairs[0].vector.values()[i] * ground.values()[i] * cell;
        na += pairs[0].vector.values()[i] * pairs[0].vector.values()[i] * cell;
        nb += ground.values()[i] * ground.values()[i] * cell;
    }
    CHECK(std::abs(dot) / std::sqrt(na * nb) >= 1.0 - 1e-8);
}

TEST_CASE("oscillator spectrum is grid independent") {
    auto vals64 = oscillator_spectrum(make_grid(64, 16.0), 3, 1e-8);
    auto vals128 = oscillator_spectrum(make_grid(128, 16.0), 3, 1e-8);
    for (int i = 0; i < 3; ++i) CHECK(std::abs(vals64[i] - vals128[i]) < 1e-6);

    // confinement: independent of the box half-length
    auto vals12 = oscillator_spectrum(make_grid(64, 12.0), 3, 1e-8);
    for (int i = 0; i < 3; ++i) CHECK(std::abs(vals64[i] - vals12[i]) < 1e-6);
}

TEST_CASE("oscillator spectrum input validation") {
    CHECK_THROWS_AS(oscillator_spectrum(make_grid(64, 16.0), 11, 1e-8), validation_error);
    CHECK_THROWS_AS(oscillator_spectrum(make_grid(64, 16.0), 0, 1e-8), validation_error);
}

TEST_CASE("estimate ratio suite on a small corpus") {
    EstimateSuiteConfig cfg;
    cfg.seed = 7;
    cfg.count = 6;
    cfg.band_kappa = 1.5;
    cfg.n_coarse = 64;
    cfg.n_fine = 128;
    cfg.half_length = 16.0;
    EstimateSuiteReport rep = estimate_ratio_suite(cfg);
    REQUIRE(rep.estimates.size() == 10);
    for (const auto& e : rep.estimates) {
        CHECK(e.finite);
        CHECK(e.coarse.samples == 6);
        if (e.exact_one) {
            CHECK(e.coarse.max_ratio == doctest::Approx(1.0).epsilon(1e-12));
            CHECK(e.fine.max_ratio == doctest::Approx(1.0).epsilon(1e-12));
        } else {
            CHECK(e.coarse.max_ratio > 0.0);
        }
    }

    // determinism of the machine-readable summary
    EstimateSuiteReport rep2 = estimate_ratio_suite(cfg);
    CHECK(estimate_report_json(rep) == estimate_report_json(rep2));
    CHECK(!estimate_report_csv(rep).empty());
    CHECK(estimate_report_text(rep).find("verdict") != std::string::npos);
}

TEST_CASE("transport drift report and paired difference monotonicity") {
    auto run_with_eps = [&](double eps) {
        RunConfig cfg = parse_config_text(
            R"({"alpha": 1.0, "epsilon": 0.01, "n": 96, "half_length": 16.0, "t_end": 0.5,
                "band_kappa": 1.0, "output_every": 8})");
        cfg.epsilon = eps;
        return simulate(cfg);
    };
    SimulationResult base = run_with_eps(1e-2);
    TransportDriftReport drift = transport_invariant_report(base.series);
    CHECK(drift.max_drift_l2 < 0.01);
    CHECK(drift.max_drift_l4 < 0.01);

    // identical paired runs: difference identically zero
    SimulationResult twin = run_with_eps(1e-2);
    std::vector<double> zero_diff =
        paired_density_difference({base.state.b}, {twin.state.b}, 8.0);
    CHECK(zero_diff[0] == 0.0);

    // runs differing only in the w perturbation amplitude: the density
    // difference at the final time shrinks monotonically with epsilon
    SimulationResult half = run_with_eps(5e-3);
    SimulationResult quarter = run_with_eps(2.5e-3);
    const double d1 = paired_density_difference({base.state.b}, {half.state.b}, 8.0)[0];
    const double d2 = paired_density_difference({half.state.b}, {quarter.state.b}, 8.0)[0];
    CHECK(d1 > d2);
    CHECK(d2 > 0.0);
}
