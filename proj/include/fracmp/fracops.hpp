#pragma once

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "fracmp/grid.hpp"

namespace fracmp {

/*
 * Transform convention (used everywhere in the library):
 *
 *   u^(w) = (2 pi)^{-1/2} \int u(t) e^{-i w t} dt          (unitary, angular frequency)
 *
 * so that \int |u|^2 dt = \int |u^|^2 dw and the left Liouville-Weyl derivative has symbol
 * (i w)^alpha = |w|^alpha exp(i sign(w) alpha pi / 2) (principal branch, 0 at w = 0).
 * On a RealLineGrid the transform is sampled by the FFT; the Nyquist mode is annihilated by
 * every multiplier so that all multipliers are conjugate-symmetric.
 */

/// Throws DomainError unless 0 < alpha < 1.
void require_order(double alpha);

/// How liouville_weyl_left treats the periodic images introduced by truncating the line.
enum class TailMode {
    /// Pure spectral multiplier on the periodic grid. Consistent with quadratic_form_alpha.
    periodic,
    /// Subtracts the right-hand periodic images of the algebraic tail of D^alpha u using
    /// a moment expansion of u about t = 0. Approximates the operator on the whole line for
    /// u concentrated well inside the grid.
    image_corrected,
};

/// Samples of the unitary transform at the nonnegative grid frequencies k = 0..N/2,
/// stored component-major: coefficients[c * (N/2+1) + k].
struct Spectrum {
    RealLineGrid grid;
    std::size_t dim;
    std::vector<std::complex<double>> coefficients;

    std::size_t half() const noexcept { return grid.size() / 2 + 1; }
    std::complex<double> at(std::size_t k, std::size_t c) const { return coefficients[c * half() + k]; }
};

Spectrum forward_transform(const GridFunction& u);
/// Inverse of forward_transform; real by construction (conjugate symmetry is implicit).
GridFunction inverse_transform(const Spectrum& s);

/// (i w_k)^alpha over grid.frequencies(), Nyquist entry 0.
std::vector<std::complex<double>> liouville_weyl_multiplier(const RealLineGrid& grid, double alpha);
/// |w_k|^{2 alpha} over grid.frequencies(), Nyquist entry 0.
std::vector<double> energy_multiplier(const RealLineGrid& grid, double alpha);

GridFunction liouville_weyl_left(const GridFunction& u, double alpha,
                                 TailMode tail = TailMode::periodic);

/// \int |w|^{2 alpha} |u^(w)|^2 dw with the discrete Parseval weight.
double quadratic_form_alpha(const GridFunction& u, double alpha);
/// Polarized form of quadratic_form_alpha.
double bilinear_form_alpha(const GridFunction& u, const GridFunction& v, double alpha);

/// K u where K is the circulant operator with symbol |w|^{2 alpha}; h * <Ku, v> equals
/// bilinear_form_alpha(u, v).
GridFunction apply_energy_operator(const GridFunction& u, double alpha);
/// (shift + K)^{-1} f, diagonal in frequency. shift must be > 0.
GridFunction solve_shifted_energy_operator(const GridFunction& f, double alpha, double shift);

/// Grünwald-Letnikov weights w_j = (-1)^j binom(alpha, j), j < count.
std::vector<double> grunwald_weights(double alpha, std::size_t count);

/// Left Riemann-Liouville derivative on [a, b] by the (non-shifted) Grünwald-Letnikov sum
/// (D u)_i = h^{-alpha} sum_{j<=i} w_j u_{i-j}. First-order accurate when u(a) = 0.
GridFunction grunwald_left_rl(const GridFunction& u, double alpha);

/// The lower-triangular Toeplitz matrix applied by grunwald_left_rl.
Eigen::MatrixXd grunwald_matrix(const IntervalGrid& grid, double alpha);

/// Symmetric PSD matrix on the interior nodes with u^T A u = trapezoid(|grunwald_left_rl(u)|^2)
/// for every Dirichlet u. A = B_I^T Q B_I with Q the trapezoid weights and B_I the interior
/// columns of the GL matrix. Exactly symmetric.
Eigen::MatrixXd interval_stiffness(const IntervalGrid& grid, double alpha);

/// Trapezoid weights: h everywhere on the periodic line grid, h/2 at the ends of an interval.
std::vector<double> quadrature_weights(const Grid& grid);
double integrate(const Grid& grid, std::span<const double> samples);
/// Trapezoid integral of a scalar grid function.
double quadrature(const GridFunction& u);

} // namespace fracmp
