#include "doctest.h"

#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "fracmp/errors.hpp"
#include "fracmp/fracops.hpp"
#include "fracmp/sampling.hpp"
#include "fracmp/spaces.hpp"

using namespace fracmp;

namespace {

const RealLineGrid grid(20.0, 4096);

GridFunction gaussian(const RealLineGrid& g) {
    return GridFunction::sample(g, [](double t) { return std::exp(-0.5 * t * t); });
}

double value_at(const GridFunction& u, double t) {
    const auto& g = u.line();
    return u(static_cast<std::size_t>(std::lround((t + g.halfwidth()) / g.spacing())), 0);
}

} // namespace

TEST_CASE("order outside (0,1) is rejected") {
    auto u = gaussian(grid);
    CHECK_THROWS_AS(liouville_weyl_left(u, 1.0), DomainError);
    CHECK_THROWS_AS(quadratic_form_alpha(u, 0.0), DomainError);
    CHECK_THROWS_AS(grunwald_left_rl(GridFunction(IntervalGrid(0, 1, 9), 1), 1.2), DomainError);
}

TEST_CASE("transform round trip and Parseval") {
    const auto u = sample_line(grid, 2, 7, 0);
    const auto back = inverse_transform(forward_transform(u));
    for (std::size_t i = 0; i < u.values().size(); ++i) CHECK(back.values()[i] == doctest::Approx(u.values()[i]).epsilon(1e-12));
    const auto s = forward_transform(u);
    // Full-spectrum sum with conjugate pairs counted twice.
    double energy = 0.0;
    const double dw = 2.0 * std::numbers::pi / grid.period();
    for (std::size_t c = 0; c < 2; ++c) {
        for (std::size_t k = 0; k < s.half(); ++k) {
            const double m = (k == 0 || k == grid.size() / 2) ? 1.0 : 2.0;
            energy += m * std::norm(s.at(k, c)) * dw;
        }
    }
    CHECK(energy == doctest::Approx(l2_inner(u, u)).epsilon(1e-12));
}

TEST_CASE("multipliers vanish at zero and Nyquist frequencies") {
    const auto m = liouville_weyl_multiplier(grid, 0.7);
    const auto e = energy_multiplier(grid, 0.7);
    CHECK(std::abs(m[0]) == 0.0);
    CHECK(std::abs(m[grid.size() / 2]) == 0.0);
    CHECK(e[grid.size() / 2] == 0.0);
    CHECK(std::arg(m[1]) == doctest::Approx(0.35 * std::numbers::pi));
    CHECK(std::arg(m[grid.size() - 1]) == doctest::Approx(-0.35 * std::numbers::pi));
}

TEST_CASE("Liouville-Weyl derivative of a Gaussian matches the integral definition") {
    // Oracle: (1/Gamma(1-a)) int_0^inf u'(x - r) r^{-a} dr at a = 0.6, evaluated in 30-digit arithmetic.
    const std::pair<double, double> oracle[] = {
        {-1.0, 0.65574664472968573808},
        {0.0, 0.47532584277497142215},
        {0.5, 0.066952362457548356053},
        {2.0, -0.35915976403077691769},
    };
    // h = 1/128 puts every oracle point on a node.
    const RealLineGrid fine(16.0, 4096);
    const auto u = gaussian(fine);
    const auto corrected = liouville_weyl_left(u, 0.6, TailMode::image_corrected);
    const auto periodic = liouville_weyl_left(u, 0.6, TailMode::periodic);
    const double scale = sup_norm(corrected);
    double worst_periodic = 0.0;
    for (const auto& [x, v] : oracle) {
        CHECK(std::abs(value_at(corrected, x) - v) <= 1e-6 * scale);
        worst_periodic = std::max(worst_periodic, std::abs(value_at(periodic, x) - v));
    }
    // The periodic images of the algebraic tail cost a few 1e-3 at this truncation.
    CHECK(worst_periodic < 1e-2);
    CHECK(worst_periodic > 1e-6);
}

TEST_CASE("quadratic form equals the squared L2 norm of the derivative") {
    for (std::uint64_t k = 0; k < 100; ++k) {
        const auto u = sample_line(grid, 1, 11, 3 * k + 2);
        const double q = quadratic_form_alpha(u, 0.75);
        const auto d = liouville_weyl_left(u, 0.75);
        CHECK(std::abs(q - l2_inner(d, d)) <= 1e-10 * q);
    }
}

TEST_CASE("quadratic form of a Gaussian") {
    // int |w|^{2a} |u^|^2 = Gamma(a + 1/2) for u = exp(-t^2/2). The Riemann sum over grid
    // frequencies misses the |w|^{2a} kink at w = 0 by about 2e-3 at this resolution.
    const auto u = gaussian(grid);
    CHECK(quadratic_form_alpha(u, 0.6) == doctest::Approx(0.95135076986687318363).epsilon(5e-3));
    CHECK(quadratic_form_alpha(u, 0.75) == doctest::Approx(0.90640247705547707798).epsilon(5e-3));
}

TEST_CASE("energy operator is the symmetric form") {
    const auto u = sample_line(grid, 1, 3, 1);
    const auto v = sample_line(grid, 1, 3, 5);
    const auto ku = apply_energy_operator(u, 0.8);
    const double via_operator = grid.spacing() * [&] {
        double s = 0.0;
        for (std::size_t j = 0; j < grid.size(); ++j) s += ku(j, 0) * v(j, 0);
        return s;
    }();
    CHECK(via_operator == doctest::Approx(bilinear_form_alpha(u, v, 0.8)).epsilon(1e-11));
    CHECK(bilinear_form_alpha(u, v, 0.8) == doctest::Approx(bilinear_form_alpha(v, u, 0.8)).epsilon(1e-13));
    CHECK(quadratic_form_alpha(u, 0.8) >= 0.0);
}

TEST_CASE("shifted solve inverts 1 + K") {
    const auto f = sample_line(grid, 1, 4, 0);
    const auto x = solve_shifted_energy_operator(f, 0.7, 1.0);
    auto back = apply_energy_operator(x, 0.7);
    back += x;
    for (std::size_t j = 0; j < grid.size(); ++j) CHECK(back(j, 0) == doctest::Approx(f(j, 0)).epsilon(1e-10).scale(1.0));
    CHECK_THROWS_AS(solve_shifted_energy_operator(f, 0.7, 0.0), DomainError);
}

TEST_CASE("Grünwald weights") {
    const auto w = grunwald_weights(0.75, 5);
    CHECK(w[0] == 1.0);
    CHECK(w[1] == doctest::Approx(-0.75));
    CHECK(w[2] == doctest::Approx(0.75 * (0.75 - 1.0) / 2.0));
    for (std::size_t j = 1; j < w.size(); ++j) CHECK(w[j] < 0.0);
}

TEST_CASE("Grünwald derivative of t^2 converges at first order") {
    // D^a t^2 = 2/Gamma(3 - a) t^{2-a} on [0, 1] at a = 0.75.
    const double coef = 1.7652202421133396119;
    std::vector<double> errors;
    for (std::size_t n : {65u, 129u, 257u, 513u, 1025u}) {
        const IntervalGrid g(0.0, 1.0, n);
        const auto u = GridFunction::sample(g, [](double t) { return t * t; });
        const auto d = grunwald_left_rl(u, 0.75);
        double err = 0.0;
        for (std::size_t j = 0; j < n; ++j) err = std::max(err, std::abs(d(j, 0) - coef * std::pow(g.node(j), 1.25)));
        errors.push_back(err);
    }
    for (std::size_t i = 1; i < errors.size(); ++i) CHECK(std::log2(errors[i - 1] / errors[i]) >= 0.9);
}

TEST_CASE("Grünwald matrix applies the same sum") {
    const IntervalGrid g(-1.0, 2.0, 33, true);
    const auto u = sample_interval(g, 1, 2, 0);
    const auto d = grunwald_left_rl(u, 0.6);
    const auto b = grunwald_matrix(g, 0.6);
    Eigen::VectorXd x(33);
    for (int j = 0; j < 33; ++j) x(j) = u(static_cast<std::size_t>(j), 0);
    const Eigen::VectorXd y = b * x;
    for (int j = 0; j < 33; ++j) CHECK(y(j) == doctest::Approx(d(static_cast<std::size_t>(j), 0)).epsilon(1e-12));
}

TEST_CASE("interval stiffness is symmetric PSD and reproduces the trapezoid form") {
    const IntervalGrid g(-0.2, 0.2, 41, true);
    const auto a = interval_stiffness(g, 0.75);
    CHECK((a - a.transpose()).cwiseAbs().maxCoeff() == 0.0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(a);
    CHECK(eig.eigenvalues().minCoeff() > 0.0);
    for (std::uint64_t id = 0; id < 6; ++id) {
        const auto u = sample_interval(g, 1, 5, id);
        const auto d = grunwald_left_rl(u, 0.75);
        Eigen::VectorXd x(39);
        for (int i = 0; i < 39; ++i) x(i) = u(static_cast<std::size_t>(i) + 1, 0);
        CHECK(x.dot(a * x) == doctest::Approx(l2_inner(d, d)).epsilon(1e-12));
    }
    CHECK_THROWS(interval_stiffness(IntervalGrid(0.0, 1.0, 2), 0.75));
}

TEST_CASE("quadrature weights") {
    const auto wl = quadrature_weights(Grid(RealLineGrid(1.0, 8)));
    CHECK(wl.front() == 0.25);
    const auto wi = quadrature_weights(Grid(IntervalGrid(0.0, 1.0, 5)));
    CHECK(wi.front() == 0.125);
    CHECK(wi[2] == 0.25);
    const auto u = GridFunction::sample(IntervalGrid(0.0, 1.0, 101), [](double t) { return t; });
    CHECK(quadrature(u) == doctest::Approx(0.5));
}
