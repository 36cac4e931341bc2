#pragma once

#include <cmath>
#include <memory>
#include <numbers>
#include <string>
#include <vector>

#include "oseenlab/errors.hpp"

namespace oseenlab {

/// Uniform n x n grid on the periodic square [-L, L)^2 with FFT wavenumber
/// tables. Coordinates are xi_i = -L + i*dx, wavenumbers kappa_j = (pi/L)*j
/// in standard FFT ordering (0, 1, ..., n/2, -n/2+1, ..., -1); the unpaired
/// Nyquist mode at index n/2 is stored with positive sign.
struct SpectralGrid {
    int n = 0;
    double half_length = 0.0;
    double dx = 0.0;
    std::vector<double> coords;       // n sample positions per axis
    std::vector<double> wavenumbers;  // n wavenumbers per axis, FFT order

    // Largest kept mode index of the 2/3 rule: biggest c with 3*c < n, so a
    // product of two kept modes can never alias onto a kept mode.
    int dealias_cutoff = 0;

    double cell_area() const { return dx * dx; }
    double nyquist() const { return wavenumbers[static_cast<std::size_t>(n) / 2]; }

    /// Signed mode index of array position j (0..n-1).
    int signed_mode(int j) const { return j <= n / 2 ? j : j - n; }

    std::size_t index(int i1, int i2) const {
        return static_cast<std::size_t>(i1) * static_cast<std::size_t>(n) +
               static_cast<std::size_t>(i2);
    }
};

using GridPtr = std::shared_ptr<const SpectralGrid>;

inline GridPtr make_grid(int n, double half_length) {
    if (n < 8) throw validation_error("make_grid: n must be >= 8, got " + std::to_string(n));
    if (n % 2 != 0) throw validation_error("make_grid: n must be even, got " + std::to_string(n));
    if (!(half_length > 0.0))
        throw validation_error("make_grid: half_length must be positive, got " +
                               std::to_string(half_length));

    auto g = std::make_shared<SpectralGrid>();
    g->n = n;
    g->half_length = half_length;
    g->dx = 2.0 * half_length / n;
    g->coords.resize(n);
    g->wavenumbers.resize(n);
    const double k0 = std::numbers::pi / half_length;
    for (int i = 0; i < n; ++i) {
        g->coords[i] = -half_length + i * g->dx;
        const int j = i <= n / 2 ? i : i - n;
        g->wavenumbers[i] = k0 * j;
    }
    g->dealias_cutoff = (n - 1) / 3;
    return g;
}

inline bool same_grid(const SpectralGrid& a, const SpectralGrid& b) {
    return a.n == b.n && a.half_length == b.half_length;
}

}  // namespace oseenlab
