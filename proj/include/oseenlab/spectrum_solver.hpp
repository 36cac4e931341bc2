#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "oseenlab/operators.hpp"

namespace oseenlab {

namespace detail {

/// Eigen-decomposition of a symmetric tridiagonal matrix by the implicit QL
/// algorithm. diag/off enter as the matrix (off[i] couples i and i+1) and
/// leave as eigenvalues; z returns the eigenvector matrix (column k is the
/// eigenvector of diag[k]) when requested.
inline void tridiag_ql(std::vector<double>& diag, std::vector<double>& off,
                       std::vector<std::vector<double>>* z) {
    const int n = static_cast<int>(diag.size());
    off.push_back(0.0);
    if (z) {
        z->assign(n, std::vector<double>(n, 0.0));
        for (int i = 0; i < n; ++i) (*z)[i][i] = 1.0;
    }
    for (int l = 0; l < n; ++l) {
        int iter = 0;
        int m;
        do {
            for (m = l; m < n - 1; ++m) {
                const double dd = std::abs(diag[m]) + std::abs(diag[m + 1]);
                if (std::abs(off[m]) <= 1e-15 * dd) break;
            }
            if (m != l) {
                if (iter++ == 50) throw numerical_error("tridiag_ql: too many iterations");
                double g = (diag[l + 1] - diag[l]) / (2.0 * off[l]);
                double r = std::hypot(g, 1.0);
                g = diag[m] - diag[l] + off[l] / (g + (g >= 0 ? std::abs(r) : -std::abs(r)));
                double s = 1.0, c = 1.0, p = 0.0;
                bool underflow = false;
                for (int i = m - 1; i >= l; --i) {
                    double f = s * off[i];
                    const double b = c * off[i];
                    r = std::hypot(f, g);
                    off[i + 1] = r;
                    if (r == 0.0) {
                        diag[i + 1] -= p;
                        off[m] = 0.0;
                        underflow = true;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = diag[i + 1] - p;
                    r = (diag[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    diag[i + 1] = g + p;
                    g = c * r - b;
                    if (z) {
                        for (int k = 0; k < n; ++k) {
                            f = (*z)[k][i + 1];
                            (*z)[k][i + 1] = s * (*z)[k][i] + c * f;
                            (*z)[k][i] = c * (*z)[k][i] - s * f;
                        }
                    }
                }
                if (underflow) continue;
                diag[l] -= p;
                off[l] = g;
                off[m] = 0.0;
            }
        } while (m != l);
    }
    off.pop_back();
}

using SampleVector = std::vector<double>;

inline double dot(const SampleVector& a, const SampleVector& b, double cell_area) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s * cell_area;
}

inline void axpy(double a, const SampleVector& x, SampleVector& y) {
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += a * x[i];
}

}  // namespace detail

struct EigenPair {
    double value = 0.0;
    ScalarField vector;
};

/// Smallest eigenpairs of the conjugated harmonic oscillator by Lanczos with
/// full reorthogonalization and deflation of converged pairs. The operator is
/// real symmetric in the grid inner product (spectral -Laplacian plus a
/// pointwise potential), so plain Lanczos applies; deflation recovers the
/// multiplicities a single Krylov sequence cannot see.
inline std::vector<EigenPair> oscillator_eigenpairs(const GridPtr& grid, int k, double tol) {
    if (k < 1 || k > 10)
        throw validation_error("oscillator_spectrum: k must be between 1 and 10");
    const double cell = grid->cell_area();
    const std::size_t dim = static_cast<std::size_t>(grid->n) * grid->n;
    const int max_lanczos = 360;

    std::mt19937_64 rng(20240517u);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<EigenPair> found;

    auto apply = [&](const detail::SampleVector& in, detail::SampleVector& out) {
        conjugated_oscillator_apply(grid, in, out);
    };
    auto deflate = [&](detail::SampleVector& v) {
        for (const auto& pair : found)
            detail::axpy(-detail::dot(v, pair.vector.values(), cell), pair.vector.values(), v);
    };

    while (static_cast<int>(found.size()) < k) {
        std::vector<detail::SampleVector> basis;
        std::vector<double> alpha, beta;

        detail::SampleVector v(dim);
        for (auto& x : v) x = normal(rng);
        deflate(v);
        double nrm = std::sqrt(detail::dot(v, v, cell));
        for (auto& x : v) x /= nrm;
        basis.push_back(v);

        detail::SampleVector w(dim);
        double converged_value = 0.0;
        std::vector<double> ritz_vector_coeffs;
        bool converged = false;

        for (int j = 0; j < max_lanczos && !converged; ++j) {
            apply(basis[j], w);
            deflate(w);
            const double a = detail::dot(w, basis[j], cell);
            alpha.push_back(a);
            detail::axpy(-a, basis[j], w);
            if (j > 0) detail::axpy(-beta[j - 1], basis[j - 1], w);
            // full reorthogonalization (twice is enough)
            for (int pass = 0; pass < 2; ++pass)
                for (const auto& q : basis) detail::axpy(-detail::dot(w, q, cell), q, w);

            const double b = std::sqrt(detail::dot(w, w, cell));

            // Ritz check every few iterations once the basis is warm
            if (j >= 8 && (j % 4 == 0 || b < 1e-13 || j == max_lanczos - 1)) {
                std::vector<double> d = alpha;
                std::vector<double> e(beta.begin(), beta.end());
                e.resize(d.size(), 0.0);
                std::vector<std::vector<double>> z;
                detail::tridiag_ql(d, e, &z);
                int best = 0;
                for (std::size_t i = 1; i < d.size(); ++i)
                    if (d[i] < d[best]) best = static_cast<int>(i);
                // residual of the smallest Ritz pair: |beta_j * last component|
                const double resid = b * std::abs(z[d.size() - 1][best]);
                if (resid <= tol || b < 1e-13 || j == max_lanczos - 1) {
                    if (resid > tol && b >= 1e-13)
                        throw numerical_error(
                            "oscillator_spectrum: Lanczos did not converge (residual " +
                            std::to_string(resid) + " after " + std::to_string(j + 1) +
                            " iterations)");
                    converged_value = d[best];
                    ritz_vector_coeffs.resize(d.size());
                    for (std::size_t i = 0; i < d.size(); ++i)
                        ritz_vector_coeffs[i] = z[i][best];
                    converged = true;
                    break;
                }
            }
            if (b < 1e-13 && !converged) {
                // invariant subspace exhausted; restart with a fresh vector
                break;
            }
            beta.push_back(b);
            for (auto& x : w) x /= b;
            basis.push_back(w);
        }
        if (!converged) continue;

        detail::SampleVector eig(dim, 0.0);
        for (std::size_t i = 0; i < ritz_vector_coeffs.size(); ++i)
            detail::axpy(ritz_vector_coeffs[i], basis[i], eig);
        deflate(eig);
        const double nrm_eig = std::sqrt(detail::dot(eig, eig, cell));
        for (auto& x : eig) x /= nrm_eig;
        found.push_back(EigenPair{converged_value, ScalarField(grid, std::move(eig))});
    }

    std::sort(found.begin(), found.end(),
              [](const EigenPair& a, const EigenPair& b) { return a.value < b.value; });
    return found;
}

/// The k smallest eigenvalues of the conjugated oscillator.
inline std::vector<double> oscillator_spectrum(const GridPtr& grid, int k, double tol = 1e-8) {
    std::vector<double> values;
    for (const auto& pair : oscillator_eigenpairs(grid, k, tol)) values.push_back(pair.value);
    return values;
}

}  // namespace oseenlab
