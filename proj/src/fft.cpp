#include "fft.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <new>

namespace fracmp::detail {

namespace {
// FFTW's planner is not reentrant.
std::mutex planner_mutex;
} // namespace

RealFft::RealFft(std::size_t n) : n_(n) {
    std::lock_guard lock(planner_mutex);
    real_ = fftw_alloc_real(n_);
    spec_ = fftw_alloc_complex(n_ / 2 + 1);
    if (real_ == nullptr || spec_ == nullptr) throw std::bad_alloc();
    const int len = static_cast<int>(n_);
    r2c_ = fftw_plan_dft_r2c_1d(len, real_, spec_, FFTW_ESTIMATE);
    c2r_ = fftw_plan_dft_c2r_1d(len, spec_, real_, FFTW_ESTIMATE);
}

RealFft::~RealFft() {
    std::lock_guard lock(planner_mutex);
    fftw_destroy_plan(r2c_);
    fftw_destroy_plan(c2r_);
    fftw_free(real_);
    fftw_free(spec_);
}

void RealFft::forward(std::span<const double> in, std::span<std::complex<double>> out) {
    std::copy(in.begin(), in.end(), real_);
    fftw_execute(r2c_);
    for (std::size_t k = 0; k < half(); ++k) out[k] = {spec_[k][0], spec_[k][1]};
}

void RealFft::inverse(std::span<const std::complex<double>> in, std::span<double> out) {
    for (std::size_t k = 0; k < half(); ++k) {
        spec_[k][0] = in[k].real();
        spec_[k][1] = in[k].imag();
    }
    fftw_execute(c2r_);
    std::copy(real_, real_ + n_, out.begin());
}

RealFft& plan_for(std::size_t n) {
    thread_local std::map<std::size_t, std::unique_ptr<RealFft>> cache;
    auto& slot = cache[n];
    if (!slot) slot = std::make_unique<RealFft>(n);
    return *slot;
}

} // namespace fracmp::detail
