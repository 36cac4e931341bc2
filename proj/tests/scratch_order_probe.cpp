// scratch: magnitudes in the Richardson order check
#include <cstdio>
#include <string>

#include "oseenlab/evolution.hpp"

using namespace oseenlab;

int run_case(const char* label, const std::string& extra);
int main() {
    run_case("full", "");
    run_case("b/10", R"(, "epsilon_b": 0.03)");
    run_case("b/100", R"(, "epsilon_b": 0.003)");
    return 0;
}
int run_case(const char* label, const std::string& extra) {
    std::printf("--- %s ---\n", label);
    RunConfig cfg = parse_config_text(
        std::string(R"({"alpha": 1.0, "epsilon": 0.3, "n": 128, "half_length": 16.0, "seed": 4,
            "band_kappa": 1.0, "pressure_tol": 1e-14)") + extra + "}");
    auto g = make_grid(cfg.n, cfg.half_length);
    PerturbationState initial = make_initial_perturbation(cfg, g);

    const double T = 0.048;
    auto run = [&](double dt) {
        PerturbationState s = initial;
        StepOptions opt;
        opt.pressure_tol = cfg.pressure_tol;
        opt.drop_transport = cfg.drop_transport;
        while (s.tau < T - 1e-12) {
            auto [next, stats] = step(s, cfg.alpha, dt, opt);
            s = std::move(next);
        }
        return s;
    };
    PerturbationState yref = run(0.00075);
    for (double dt : {0.012, 0.006, 0.003}) {
        PerturbationState y = run(dt);
        std::printf("dt=%.4f  ew=%.4e  eb=%.4e\n", dt,
                    lp_norm(y.w_tilde - yref.w_tilde, 2.0), lp_norm(y.b - yref.b, 2.0));
    }
    return 0;
}
