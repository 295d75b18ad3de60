#include "fracmp/fracops.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "fft.hpp"
#include "fracmp/errors.hpp"

namespace fracmp {

void require_order(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw DomainError("fractional order must lie in (0,1), got " + std::to_string(alpha));
    }
}

namespace {

using cplx = std::complex<double>;

// Half-spectrum symbols, k = 0..N/2. Zero frequency and Nyquist map to 0.
std::vector<cplx> lw_half(const RealLineGrid& g, double alpha) {
    const std::size_t half = g.size() / 2 + 1;
    std::vector<cplx> m(half, 0.0);
    const cplx phase = std::polar(1.0, alpha * std::numbers::pi / 2.0);
    for (std::size_t k = 1; k + 1 < half; ++k) m[k] = std::pow(g.frequency(k), alpha) * phase;
    return m;
}

std::vector<double> energy_half(const RealLineGrid& g, double alpha) {
    const std::size_t half = g.size() / 2 + 1;
    std::vector<double> q(half, 0.0);
    for (std::size_t k = 1; k + 1 < half; ++k) q[k] = std::pow(g.frequency(k), 2.0 * alpha);
    return q;
}

// Applies a real or complex half-spectrum symbol to every component of u.
template <typename Symbol>
GridFunction apply_symbol(const GridFunction& u, const std::vector<Symbol>& symbol) {
    const auto& g = u.line();
    auto& fft = detail::plan_for(g.size());
    std::vector<cplx> spec(fft.half());
    std::vector<double> buf(g.size());
    GridFunction out(u.grid(), u.dim());
    const double inv_n = 1.0 / static_cast<double>(g.size());
    for (std::size_t c = 0; c < u.dim(); ++c) {
        const auto comp = u.component(c);
        fft.forward(comp, spec);
        for (std::size_t k = 0; k < spec.size(); ++k) spec[k] *= symbol[k];
        fft.inverse(spec, buf);
        for (double& v : buf) v *= inv_n;
        out.set_component(c, buf);
    }
    return out;
}

// sum_{m>=1} (x + m L)^{-s} for x + L > 0, by direct summation plus an Euler-Maclaurin tail.
double image_sum(double x, double period, double s) {
    constexpr int direct_terms = 32;
    double sum = 0.0;
    for (int m = 1; m <= direct_terms; ++m) sum += std::pow(x + m * period, -s);
    const double y = x + (direct_terms + 1) * period;
    sum += std::pow(y, 1.0 - s) / ((s - 1.0) * period) + 0.5 * std::pow(y, -s) +
           s * period / 12.0 * std::pow(y, -s - 1.0);
    return sum;
}

// Far-field expansion of D^alpha u(y) = -(1/Gamma(1-alpha)) sum_k (alpha)_{k+1}/k! M_k y^{-alpha-k-1}
// summed over the right-hand images y = t + mL.
void subtract_right_images(GridFunction& out, const GridFunction& u, double alpha) {
    constexpr int terms = 13;
    const auto& g = u.line();
    const double h = g.spacing();
    const double inv_gamma = 1.0 / std::tgamma(1.0 - alpha);
    for (std::size_t c = 0; c < u.dim(); ++c) {
        std::vector<double> moments(terms, 0.0);
        for (std::size_t j = 0; j < g.size(); ++j) {
            const double t = g.node(j);
            double tk = h * u(j, c);
            for (int k = 0; k < terms; ++k) {
                moments[k] += tk;
                tk *= t;
            }
        }
        std::vector<double> coef(terms);
        double poch = alpha; // (alpha)_{k+1}
        double fact = 1.0;   // k!
        for (int k = 0; k < terms; ++k) {
            if (k > 0) {
                poch *= alpha + k;
                fact *= k;
            }
            coef[k] = -inv_gamma * poch / fact * moments[k];
        }
        for (std::size_t j = 0; j < g.size(); ++j) {
            const double t = g.node(j);
            double corr = 0.0;
            for (int k = 0; k < terms; ++k) {
                if (coef[k] != 0.0) corr += coef[k] * image_sum(t, g.period(), alpha + k + 1.0);
            }
            out(j, c) -= corr;
        }
    }
}

} // namespace

Spectrum forward_transform(const GridFunction& u) {
    const auto& g = u.line();
    auto& fft = detail::plan_for(g.size());
    Spectrum s{g, u.dim(), std::vector<cplx>(fft.half() * u.dim())};
    std::vector<cplx> spec(fft.half());
    const double scale = g.spacing() / std::sqrt(2.0 * std::numbers::pi);
    for (std::size_t c = 0; c < u.dim(); ++c) {
        fft.forward(u.component(c), spec);
        // e^{-i w_k t_0} with t_0 = -halfwidth equals (-1)^k.
        for (std::size_t k = 0; k < spec.size(); ++k) {
            s.coefficients[c * fft.half() + k] = (k % 2 == 0 ? scale : -scale) * spec[k];
        }
    }
    return s;
}

GridFunction inverse_transform(const Spectrum& s) {
    auto& fft = detail::plan_for(s.grid.size());
    GridFunction u(s.grid, s.dim);
    std::vector<cplx> spec(fft.half());
    std::vector<double> buf(s.grid.size());
    const double scale = std::sqrt(2.0 * std::numbers::pi) / s.grid.spacing() /
                         static_cast<double>(s.grid.size());
    for (std::size_t c = 0; c < s.dim; ++c) {
        for (std::size_t k = 0; k < spec.size(); ++k) {
            spec[k] = (k % 2 == 0 ? scale : -scale) * s.coefficients[c * fft.half() + k];
        }
        fft.inverse(spec, buf);
        u.set_component(c, buf);
    }
    return u;
}

std::vector<cplx> liouville_weyl_multiplier(const RealLineGrid& grid, double alpha) {
    require_order(alpha);
    const auto w = grid.frequencies();
    std::vector<cplx> m(w.size(), 0.0);
    const std::size_t nyquist = grid.size() / 2;
    for (std::size_t k = 0; k < w.size(); ++k) {
        if (k == 0 || k == nyquist) continue;
        const double sign = w[k] > 0.0 ? 1.0 : -1.0;
        m[k] = std::polar(std::pow(std::abs(w[k]), alpha), sign * alpha * std::numbers::pi / 2.0);
    }
    return m;
}

std::vector<double> energy_multiplier(const RealLineGrid& grid, double alpha) {
    require_order(alpha);
    const auto w = grid.frequencies();
    std::vector<double> q(w.size(), 0.0);
    const std::size_t nyquist = grid.size() / 2;
    for (std::size_t k = 0; k < w.size(); ++k) {
        if (k == 0 || k == nyquist) continue;
        q[k] = std::pow(std::abs(w[k]), 2.0 * alpha);
    }
    return q;
}

GridFunction liouville_weyl_left(const GridFunction& u, double alpha, TailMode tail) {
    require_order(alpha);
    auto out = apply_symbol(u, lw_half(u.line(), alpha));
    if (tail == TailMode::image_corrected) subtract_right_images(out, u, alpha);
    return out;
}

double bilinear_form_alpha(const GridFunction& u, const GridFunction& v, double alpha) {
    require_order(alpha);
    require_same_space(u, v);
    const auto& g = u.line();
    auto& fft = detail::plan_for(g.size());
    const auto q = energy_half(g, alpha);
    std::vector<cplx> su(fft.half()), sv(fft.half());
    double total = 0.0;
    for (std::size_t c = 0; c < u.dim(); ++c) {
        fft.forward(u.component(c), su);
        if (&u == &v) {
            sv = su;
        } else {
            fft.forward(v.component(c), sv);
        }
        double acc = 0.0;
        // k = 0 and Nyquist carry zero weight; interior modes appear twice in the full spectrum.
        for (std::size_t k = 1; k + 1 < su.size(); ++k) {
            acc += q[k] * (su[k].real() * sv[k].real() + su[k].imag() * sv[k].imag());
        }
        total += 2.0 * acc;
    }
    return total * g.spacing() / static_cast<double>(g.size());
}

double quadratic_form_alpha(const GridFunction& u, double alpha) {
    return bilinear_form_alpha(u, u, alpha);
}

GridFunction apply_energy_operator(const GridFunction& u, double alpha) {
    require_order(alpha);
    return apply_symbol(u, energy_half(u.line(), alpha));
}

GridFunction solve_shifted_energy_operator(const GridFunction& f, double alpha, double shift) {
    require_order(alpha);
    if (!(shift > 0.0)) throw DomainError("spectral shift must be positive");
    auto q = energy_half(f.line(), alpha);
    for (double& v : q) v = 1.0 / (shift + v);
    return apply_symbol(f, q);
}

std::vector<double> grunwald_weights(double alpha, std::size_t count) {
    std::vector<double> w(count);
    if (count == 0) return w;
    w[0] = 1.0;
    for (std::size_t j = 1; j < count; ++j) {
        w[j] = w[j - 1] * (1.0 - (alpha + 1.0) / static_cast<double>(j));
    }
    return w;
}

GridFunction grunwald_left_rl(const GridFunction& u, double alpha) {
    require_order(alpha);
    const auto& g = u.interval();
    const std::size_t n = g.size();
    const auto w = grunwald_weights(alpha, n);
    const double scale = std::pow(g.spacing(), -alpha);
    // The derivative of a Dirichlet function need not vanish at the ends.
    GridFunction out(IntervalGrid(g.a(), g.b(), n, false), u.dim());
    for (std::size_t c = 0; c < u.dim(); ++c) {
        for (std::size_t i = 0; i < n; ++i) {
            double acc = 0.0;
            for (std::size_t j = 0; j <= i; ++j) acc += w[j] * u(i - j, c);
            out(i, c) = scale * acc;
        }
    }
    return out;
}

Eigen::MatrixXd grunwald_matrix(const IntervalGrid& grid, double alpha) {
    require_order(alpha);
    const auto n = static_cast<Eigen::Index>(grid.size());
    const auto w = grunwald_weights(alpha, grid.size());
    const double scale = std::pow(grid.spacing(), -alpha);
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j <= i; ++j) b(i, j) = scale * w[static_cast<std::size_t>(i - j)];
    }
    return b;
}

Eigen::MatrixXd interval_stiffness(const IntervalGrid& grid, double alpha) {
    if (grid.size() < 3) throw ConfigError("interval stiffness needs at least 3 nodes");
    const Eigen::MatrixXd b = grunwald_matrix(grid, alpha);
    const auto n = b.rows();
    const auto m = n - 2;
    const auto q = quadrature_weights(grid);
    Eigen::VectorXd qv(n);
    for (Eigen::Index i = 0; i < n; ++i) qv(i) = q[static_cast<std::size_t>(i)];
    const Eigen::MatrixXd bi = b.middleCols(1, m);
    Eigen::MatrixXd a = bi.transpose() * qv.asDiagonal() * bi;
    for (Eigen::Index i = 0; i < m; ++i) {
        for (Eigen::Index j = i + 1; j < m; ++j) a(j, i) = a(i, j);
    }
    return a;
}

std::vector<double> quadrature_weights(const Grid& grid) {
    return std::visit(
        [](const auto& g) {
            std::vector<double> w(g.size(), g.spacing());
            if constexpr (std::is_same_v<std::decay_t<decltype(g)>, IntervalGrid>) {
                w.front() *= 0.5;
                w.back() *= 0.5;
            }
            return w;
        },
        grid);
}

double integrate(const Grid& grid, std::span<const double> samples) {
    const auto w = quadrature_weights(grid);
    if (samples.size() != w.size()) throw GridMismatch("sample count does not match grid");
    double s = 0.0;
    for (std::size_t j = 0; j < w.size(); ++j) s += w[j] * samples[j];
    return s;
}

double quadrature(const GridFunction& u) {
    if (u.dim() != 1) throw ConfigError("quadrature expects a scalar grid function");
    return integrate(u.grid(), u.values());
}

} // namespace fracmp
