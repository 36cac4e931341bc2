#pragma once

#include <fftw3.h>

#include <complex>
#include <map>
#include <memory>
#include <mutex>

#include "oseenlab/grid.hpp"

namespace oseenlab::detail {

/// Cached FFTW plans for one grid size. The transform pair realizes
///
///   coeffs[j] = dx^2 * sum_m values[m] e^{-i kappa_j . xi_m}
///   values[m] = (2L)^{-2} * sum_j coeffs[j] e^{+i kappa_j . xi_m}
///
/// i.e. the discrete analogue of the continuum Fourier transform with the
/// analysis kernel e^{-i k x}. The (-1)^{j1+j2} factor accounts for the
/// sample origin at -L instead of 0.
class FftEngine {
  public:
    static FftEngine& for_size(int n) {
        static std::mutex registry_mutex;
        static std::map<int, std::unique_ptr<FftEngine>> registry;
        std::lock_guard<std::mutex> lock(registry_mutex);
        auto it = registry.find(n);
        if (it == registry.end())
            it = registry.emplace(n, std::unique_ptr<FftEngine>(new FftEngine(n))).first;
        return *it->second;
    }

    void forward(const SpectralGrid& g, const double* values, std::complex<double>* out) {
        std::lock_guard<std::mutex> lock(mutex_);
        const std::size_t total = static_cast<std::size_t>(n_) * n_;
        for (std::size_t m = 0; m < total; ++m) {
            buf_[m][0] = values[m];
            buf_[m][1] = 0.0;
        }
        fftw_execute(fwd_);
        const double scale = g.cell_area();
        apply_phase_and_scale(out, scale);
    }

    void inverse(const SpectralGrid& g, const std::complex<double>* coeffs, double* values) {
        std::lock_guard<std::mutex> lock(mutex_);
        const double scale = 1.0 / (4.0 * g.half_length * g.half_length);
        for (int i1 = 0; i1 < n_; ++i1) {
            const double row_sign = (i1 % 2 == 0) ? 1.0 : -1.0;
            for (int i2 = 0; i2 < n_; ++i2) {
                const std::size_t m = static_cast<std::size_t>(i1) * n_ + i2;
                const double s = (i2 % 2 == 0) ? row_sign : -row_sign;
                buf_[m][0] = s * coeffs[m].real();
                buf_[m][1] = s * coeffs[m].imag();
            }
        }
        fftw_execute(bwd_);
        const std::size_t total = static_cast<std::size_t>(n_) * n_;
        for (std::size_t m = 0; m < total; ++m) values[m] = scale * out_[m][0];
    }

    FftEngine(const FftEngine&) = delete;
    FftEngine& operator=(const FftEngine&) = delete;

    ~FftEngine() {
        fftw_destroy_plan(fwd_);
        fftw_destroy_plan(bwd_);
        fftw_free(buf_);
        fftw_free(out_);
    }

  private:
    explicit FftEngine(int n) : n_(n) {
        const std::size_t total = static_cast<std::size_t>(n) * n;
        buf_ = fftw_alloc_complex(total);
        out_ = fftw_alloc_complex(total);
        // ESTIMATE planning is deterministic; MEASURE picks plans by timing,
        // which breaks the bit-identical-output contract across processes.
        fwd_ = fftw_plan_dft_2d(n, n, buf_, out_, FFTW_FORWARD, FFTW_ESTIMATE);
        bwd_ = fftw_plan_dft_2d(n, n, buf_, out_, FFTW_BACKWARD, FFTW_ESTIMATE);
    }

    void apply_phase_and_scale(std::complex<double>* out, double scale) {
        for (int j1 = 0; j1 < n_; ++j1) {
            const double row_sign = (j1 % 2 == 0) ? scale : -scale;
            for (int j2 = 0; j2 < n_; ++j2) {
                const std::size_t m = static_cast<std::size_t>(j1) * n_ + j2;
                const double s = (j2 % 2 == 0) ? row_sign : -row_sign;
                out[m] = std::complex<double>(s * out_[m][0], s * out_[m][1]);
            }
        }
    }

    int n_;
    fftw_complex* buf_;
    fftw_complex* out_;
    fftw_plan fwd_;
    fftw_plan bwd_;
    std::mutex mutex_;
};

}  // namespace oseenlab::detail
