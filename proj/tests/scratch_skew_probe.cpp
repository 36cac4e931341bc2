// scratch probe: decompose the Lambda skew pairing and measure scalings
#include <cstdio>
#include <tuple>
#include <random>

#include "oseenlab/operators.hpp"
#include "oseenlab/random_fields.hpp"

using namespace oseenlab;

namespace {

ScalarField enveloped(const GridPtr& g, std::mt19937_64& rng, double band, double width_sq) {
    // random trig poly * e^{-|xi|^2 / width_sq}, mean-projected
    ScalarField f = random_gaussian_enveloped(g, rng, band);
    auto& v = f.mutable_values();
    for (int i1 = 0; i1 < g->n; ++i1)
        for (int i2 = 0; i2 < g->n; ++i2) {
            const double x = g->coords[i1];
            const double y = g->coords[i2];
            // random_gaussian_enveloped already applied e^{-r^2/4}; adjust
            v[g->index(i1, i2)] *= std::exp(-(x * x + y * y) * (1.0 / width_sq - 0.25));
        }
    return project_mean_zero(f);
}

void probe(int n, double L, double band, double width_sq, const char* label) {
    auto g = make_grid(n, L);
    std::mt19937_64 rng(99);
    double worst = 0.0, worst1 = 0.0, worst2 = 0.0;
    for (int i = 0; i < 12; ++i) {
        ScalarField f = enveloped(g, rng, band, width_sq);
        const auto& prof = detail::grid_profiles(g);
        const VectorField vf = biot_savart(f);
        const VectorField gf = gradient(f);
        ScalarField term1 = dealias(pointwise_product(prof.vG.x, gf.x) +
                                    pointwise_product(prof.vG.y, gf.y));
        ScalarField term2 = dealias(pointwise_product(vf.x, prof.grad_G.x) +
                                    pointwise_product(vf.y, prof.grad_G.y));
        const double n2 = std::pow(weighted_lp_norm(f, 2.0), 2);
        worst1 = std::max(worst1, std::abs(weighted_inner_product(f, term1)) / n2);
        worst2 = std::max(worst2, std::abs(weighted_inner_product(f, term2)) / n2);
        worst = std::max(worst, std::abs(weighted_inner_product(f, term1 + term2)) / n2);
    }
    std::printf("%-28s n=%3d L=%4.1f band=%.1f w2=%.1f  total=%.3e  vG.grad_f=%.3e  vtil.grad_G=%.3e\n",
                label, n, L, band, width_sq, worst, worst1, worst2);
}

}  // namespace

int main() {
    for (auto [n, L, label] : {std::tuple<int, double, const char*>{256, 32.0, "L=32"},
                               {192, 48.0, "L=48 dx=0.5"},
                               {384, 48.0, "L=48 dx=0.25"},
                               {256, 64.0, "L=64 dx=0.5"},
                               {512, 64.0, "L=64 dx=0.25"},
                               {640, 80.0, "L=80 dx=0.25 12s"}, {768, 96.0, "L=96 dx=0.25 12s"}}) {
        try {
            probe(n, L, 2.0, 4.0, label);
        } catch (const std::exception& e) {
            std::printf("%-28s n=%3d L=%4.1f  THREW: %s\n", label, n, L, e.what());
        }
    }
    return 0;
}
