#include "doctest.h"

#include <cmath>

#include "fracmp/config.hpp"
#include "fracmp/errors.hpp"
#include "fracmp/fracops.hpp"
#include "fracmp/functional.hpp"
#include "fracmp/mpa.hpp"
#include "fracmp/sampling.hpp"
#include "fracmp/spaces.hpp"

using namespace fracmp;

namespace {

const ProblemSpec spec = default_problem();
const EmbeddingConstants constants = make_embedding_constants(spec, 2000);

struct Coefficients {
    double a;
    double b;
};

// energy(s psi) = a s^2 - b s^4 for psi inside T and W = |u|^4.
Coefficients coefficients(const GridFunction& psi) {
    double b = 0.0;
    for (std::size_t j = 0; j < psi.nodes(); ++j) b += spec.grid.spacing() * std::pow(psi(j, 0), 4);
    return {0.5 * quadratic_form_alpha(psi, spec.alpha), b};
}

} // namespace

TEST_CASE("rho and eta for a hand-solvable bracket") {
    // theta = 1, meas = 1, eps = 1/2, C_eps/p = 1: bracket 1/4 - rho^2.
    const auto r = estimate_rho_eta(1.0, 1.0, 0.5, 4.0, 4.0);
    CHECK(r.rho < 0.5);
    CHECK(r.rho * std::pow(10.0, 1.0 / 200.0) >= 0.5);
    CHECK(r.eta == doctest::Approx(r.rho * r.rho * (0.25 - r.rho * r.rho)));
    const auto tiny = estimate_rho_eta(1.0, 1.0, 0.5, 1e10, 4.0);
    CHECK(tiny.rho > 0.0);
    CHECK(tiny.rho < 1e-4);
    CHECK_THROWS_AS(estimate_rho_eta(1.0, 1.0, 0.5, 1e30, 4.0), GeometryError);
    CHECK_THROWS_AS(estimate_rho_eta(1.0, 1.0, 1.0, 4.0, 4.0), GeometryError);
}

TEST_CASE("end point construction") {
    const auto s1 = construct_e(spec.with_lambda(1.0), constants, 0.18);
    const auto s2 = construct_e(spec.with_lambda(1000.0), constants, 0.18);
    CHECK(s1.sigma0 == s2.sigma0);
    CHECK(s1.e == s2.e);
    const auto [a, b] = coefficients(s1.psi);
    CHECK(s1.sigma0 >= std::sqrt(a / b));
    const double half = 0.5 * s1.sigma0;
    CHECK((half * half * a - std::pow(half, 4) * b >= 0.0 || norm_x_lambda(half * s1.psi, spec) <= s1.rho));
    CHECK(energy(s1.e, spec) < 0.0);
    CHECK(norm_x_lambda(s1.e, spec) > s1.rho);
    CHECK(s1.eta > 0.0);
    CHECK(energy(2.0 * s1.e, spec) < energy(s1.e, spec));
    CHECK(energy(4.0 * s1.e, spec) < energy(2.0 * s1.e, spec));
    CHECK_THROWS_AS(construct_e(spec, constants, 0.3), ConfigError);
}

TEST_CASE("ctilde for the quartic") {
    const auto s = construct_e(spec, constants, 0.18);
    const auto [a, b] = coefficients(s.psi);
    const double c = ctilde_bound(s, spec);
    CHECK(c == doctest::Approx(a * a / (4.0 * b)).epsilon(1e-4));
    CHECK(c > 0.0);
    auto doubled = spec;
    doubled.nonlinearity.g.mean = 2.0;
    CHECK(ctilde_bound(s, doubled) == doctest::Approx(0.5 * c).epsilon(1e-10));
    CHECK(ctilde_bound(s, spec.with_lambda(1000.0)) == c);
}

TEST_CASE("energy stays above eta on the rho sphere") {
    const auto s = construct_e(spec, constants, 0.18);
    for (std::uint64_t k = 0; k < 200; ++k) {
        auto u = sample_line(spec.grid, 1, 21, k);
        u *= s.rho / norm_x_lambda(u, spec);
        CHECK(energy(u, spec) >= s.eta);
    }
}

TEST_CASE("ray maximum of the quartic") {
    const LineLandscape land(spec);
    const auto s = construct_e(spec, constants, 0.18);
    const auto [a, b] = coefficients(s.psi);
    const auto peak = maximize_on_ray(land, s.psi);
    CHECK(peak.s == doctest::Approx(std::sqrt(a / (2.0 * b))).epsilon(1e-10));
    CHECK(peak.level == doctest::Approx(a * a / (4.0 * b)).epsilon(1e-12));
    CHECK(maximize_on_ray(land, s.psi, 0.5 * peak.s).s == doctest::Approx(peak.s).epsilon(1e-12));
    CHECK_THROWS_AS(maximize_on_ray(land, GridFunction(spec.grid, 1)), GeometryError);
}

TEST_CASE("config validation") {
    MpaConfig c;
    c.path_nodes = 2;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c.path_nodes = 3;
    CHECK_NOTHROW(c.validate());
}

TEST_CASE("mountain-pass solution of the default problem") {
    const auto s = construct_e(spec, constants, 0.18);
    const double ctilde = ctilde_bound(s, spec);
    std::size_t calls = 0;
    MpaConfig cfg;
    cfg.observer = [&](const TraceEntry&) { ++calls; };
    const auto r = mpa_solve(spec, s, cfg);
    REQUIRE(r.converged);
    CHECK(calls == r.trace.size());
    CHECK(r.cerami <= 1e-6);
    CHECK(r.level > 0.0);
    CHECK(r.level <= ctilde);
    CHECK(r.level >= s.eta - 1e-8);
    CHECK(r.trace.front().level == doctest::Approx(ctilde).epsilon(1e-12));
    for (std::size_t i = 1; i < r.trace.size(); ++i) {
        CHECK(r.trace[i].level <= r.trace[i - 1].level + 1e-13 * (1.0 + r.trace[i - 1].level));
    }
    const auto id = h_identity(*r.u, spec);
    CHECK(id.gap <= 1e-6 * (1.0 + r.level));
    CHECK(id.rhs == doctest::Approx(r.level).epsilon(1e-5));
    CHECK(r.path.nodes.front() == GridFunction(spec.grid, 1));
    CHECK(r.path.nodes.back() == s.e);
    CHECK(r.path.nodes.size() >= cfg.path_nodes);
    CHECK(r.path.energies[r.path.argmax] == doctest::Approx(r.level).epsilon(1e-12));
    CHECK(r.metric == "h-alpha");

    // Warm start from the solution finishes at once.
    const auto again = mpa_solve(spec, s, cfg, r.u);
    CHECK(again.iterations <= 2);
    CHECK(again.level == doctest::Approx(r.level).epsilon(1e-10));
}

TEST_CASE("X metric and restarts reach the same level") {
    const auto s = construct_e(spec, constants, 0.18);
    MpaConfig cfg;
    cfg.metric = Metric::x_alpha_lambda;
    const auto a = mpa_solve(spec, s, cfg);
    cfg.restarts = 3;
    const auto b = mpa_solve(spec, s, cfg);
    REQUIRE(a.converged);
    REQUIRE(b.converged);
    CHECK(a.metric == "x-alpha-lambda");
    CHECK(b.level <= a.level + 1e-9);
    CHECK(b.level == doctest::Approx(a.level).epsilon(1e-6));
}

TEST_CASE("three-node path") {
    const LineLandscape land(spec);
    const auto s = construct_e(spec, constants, 0.18);
    const auto peak = maximize_on_ray(land, s.e);
    const auto path = materialize_path(land, peak.s * s.e, s.e, 3);
    CHECK(path.argmax == 1);
    CHECK(path.nodes.size() >= 3);
    CHECK_THROWS_AS(materialize_path(land, s.e, s.e, 2), ConfigError);
}

TEST_CASE("boundary value problem") {
    const auto r = bvp_solve(spec);
    REQUIRE(r.converged);
    const auto& u = *r.u;
    CHECK(u(0, 0) == 0.0);
    CHECK(u(u.nodes() - 1, 0) == 0.0);
    CHECK(r.level > 0.0);
    // Weak form assembled directly: A u - h grad W at interior nodes.
    const IntervalProblem p(spec, 401);
    const auto gw = nonlinear_gradient(u, spec.nonlinearity);
    Eigen::VectorXd x(399);
    Eigen::VectorXd g(399);
    for (int i = 0; i < 399; ++i) {
        x(i) = u(static_cast<std::size_t>(i) + 1, 0);
        g(i) = gw(static_cast<std::size_t>(i) + 1, 0);
    }
    const Eigen::VectorXd res = p.stiffness() * x - p.grid().spacing() * g;
    const double unorm = std::sqrt(2.0 * p.quadratic_part(u));
    MESSAGE("direct weak residual " << res.norm() << ", metric residual " << p.euler_lagrange_residual(u));
    CHECK(res.norm() <= 1e-6 * (1.0 + unorm));
    CHECK(p.euler_lagrange_residual(u) <= 1e-6 * (1.0 + unorm));
    const auto id = p.energy(u) - 0.5 * p.derivative_action(u, u);
    double hint = 0.0;
    for (std::size_t j = 0; j < u.nodes(); ++j) hint += p.grid().spacing() * eval_h(0.0, u.node(j), spec.nonlinearity);
    CHECK(id == doctest::Approx(hint).epsilon(1e-10));
}
