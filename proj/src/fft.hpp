#pragma once

#include <complex>
#include <cstddef>
#include <span>

#include <fftw3.h>

namespace fracmp::detail {

/// Real-to-half-complex FFT of one fixed length, owning its FFTW plans and aligned buffers.
/// Not thread-safe; use plan_for() which hands out one instance per thread and length.
class RealFft {
public:
    explicit RealFft(std::size_t n);
    ~RealFft();
    RealFft(const RealFft&) = delete;
    RealFft& operator=(const RealFft&) = delete;

    std::size_t size() const noexcept { return n_; }
    std::size_t half() const noexcept { return n_ / 2 + 1; }

    /// X_k = sum_j x_j exp(-2 pi i jk/N), k = 0..N/2.
    void forward(std::span<const double> in, std::span<std::complex<double>> out);
    /// Unnormalized inverse: returns N * x for x = forward^{-1}(X).
    void inverse(std::span<const std::complex<double>> in, std::span<double> out);

private:
    std::size_t n_;
    double* real_;
    fftw_complex* spec_;
    fftw_plan r2c_;
    fftw_plan c2r_;
};

RealFft& plan_for(std::size_t n);

} // namespace fracmp::detail
