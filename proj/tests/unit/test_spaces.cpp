#include "doctest.h"

#include <cmath>
#include <random>

#include "fracmp/config.hpp"
#include "fracmp/errors.hpp"
#include "fracmp/fracops.hpp"
#include "fracmp/sampling.hpp"
#include "fracmp/spaces.hpp"

using namespace fracmp;

namespace {

const ProblemSpec spec = default_problem();

} // namespace

TEST_CASE("H^alpha norm of zero and of a Gaussian") {
    CHECK(norm_h_alpha(GridFunction(spec.grid, 1), 0.6) == 0.0);
    const auto u = GridFunction::sample(spec.grid, [](double t) { return std::exp(-0.5 * t * t); });
    // sqrt(sqrt(pi) + Gamma(1.1)); the frequency sum is 2e-3 low in the second term.
    CHECK(norm_h_alpha(u, 0.6) == doctest::Approx(1.6503952922776983039).epsilon(1e-3));
}

TEST_CASE("H^alpha norm is nondecreasing in alpha for high-frequency fields") {
    GridFunction u(spec.grid, 1);
    for (std::size_t j = 0; j < spec.grid.size(); ++j) {
        const double t = spec.grid.node(j);
        u(j, 0) = std::cos(spec.grid.frequency(40) * t) + 0.5 * std::sin(spec.grid.frequency(90) * t);
    }
    CHECK(spec.grid.frequency(40) >= 1.0);
    const double a = norm_h_alpha(u, 0.55);
    const double b = norm_h_alpha(u, 0.7);
    const double c = norm_h_alpha(u, 0.9);
    CHECK(a <= b);
    CHECK(b <= c);
}

TEST_CASE("X inner product") {
    const auto u = sample_line(spec.grid, 1, 1, 0);
    auto flat = spec;
    flat.potential.profile = [](double) { return 0.0; };
    CHECK(inner_x_lambda(u, u, flat) == doctest::Approx(quadratic_form_alpha(u, spec.alpha)).epsilon(1e-14));
    for (std::uint64_t k = 0; k < 100; ++k) {
        const auto a = sample_line(spec.grid, 1, 2, 2 * k);
        const auto b = sample_line(spec.grid, 1, 2, 2 * k + 1);
        CHECK(inner_x_lambda(a, b, spec) == doctest::Approx(inner_x_lambda(b, a, spec)).epsilon(1e-12));
    }
    CHECK_THROWS_AS(inner_x_lambda(u, sample_line(RealLineGrid(10.0, 1024), 1, 1, 0), spec), GridMismatch);
}

TEST_CASE("X norm is lambda independent for functions supported in T") {
    auto u = GridFunction(spec.grid, 1);
    for (std::size_t j = 0; j < spec.grid.size(); ++j) {
        const double x = spec.grid.node(j) / 0.15;
        if (std::abs(x) < 1.0) u(j, 0) = std::pow(1.0 - x * x, 3);
    }
    const double v1 = norm_x_lambda(u, spec.with_lambda(1.0));
    CHECK(norm_x_lambda(u, spec.with_lambda(10.0)) == v1);
    CHECK(norm_x_lambda(u, spec.with_lambda(1000.0)) == v1);
}

TEST_CASE("X norm axioms and lambda monotonicity") {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> n(0.0, 1.0);
    for (std::uint64_t k = 0; k < 20; ++k) {
        const auto a = sample_line(spec.grid, 1, 4, 3 * k);
        const auto b = sample_line(spec.grid, 1, 4, 3 * k + 1);
        const double s = n(rng);
        CHECK(norm_x_lambda(s * a, spec) == doctest::Approx(std::abs(s) * norm_x_lambda(a, spec)).epsilon(1e-10));
        CHECK(norm_x_lambda(a + b, spec) <= norm_x_lambda(a, spec) + norm_x_lambda(b, spec) + 1e-10);
        CHECK(norm_x_lambda(a, spec.with_lambda(1.0)) <= norm_x_lambda(a, spec.with_lambda(2.0)));
    }
}

TEST_CASE("sup-embedding constant") {
    const auto e1 = estimate_c_infinity(spec.grid, 0.75, 10000, 1);
    const auto e2 = estimate_c_infinity(spec.grid, 0.75, 10000, 2);
    CHECK(std::abs(e1.maximized - e2.maximized) < 0.05 * e1.maximized);
    CHECK(std::abs(e1.random - e2.random) < 0.05 * e1.random);
    CHECK(e1.random <= e1.maximized);
    // Whole-line value (1/(2 a sin(pi/(2a))))^{1/2}; the grid supremum sits just below it.
    CHECK(e1.maximized < 0.87738267530166164055);
    CHECK(e1.maximized > 0.99 * 0.87738267530166164055);
}

TEST_CASE("embedding constants") {
    const auto k = make_embedding_constants(spec, 2000);
    const double cm = k.c_infinity * k.c_infinity * k.meas_lc;
    CHECK(k.theta == doctest::Approx((1.0 - cm) / cm));
    CHECK(std::pow(k.kappa_p.at(4.0), 4.0) == doctest::Approx(1.0 / (k.theta * k.theta * k.meas_lc)));
    CHECK(k.lambda_floor == doctest::Approx(1.0 / (spec.potential.c * cm)));
    CHECK(k.gated_admissible);
    CHECK(k.margin > 0.0);
    CHECK(sublevel_measure(spec.potential, spec.grid) == doctest::Approx(0.8).epsilon(0.02));
}

TEST_CASE("interval inequality for sin(pi t)") {
    const IntervalGrid g(0.0, 1.0, 513, true);
    auto u = GridFunction::sample(g, [](double t) { return std::sin(std::numbers::pi * t); });
    u(0, 0) = 0.0;
    u(512, 0) = 0.0;
    const auto s = interval_lp_bound(u, 0.75, 2.0);
    CHECK(s.lhs == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
    CHECK(s.lhs <= s.rhs);
    const auto sup = interval_sup_bound(u, 0.75, 2.0);
    CHECK(sup.lhs <= sup.rhs);
    CHECK_THROWS_AS(interval_sup_bound(u, 0.75, 1.2), DomainError);
}

TEST_CASE("embedding verifier on zero samples and on the default problem") {
    const auto k = make_embedding_constants(spec, 2000);
    const auto none = verify_embeddings(0, spec, k);
    for (const auto& r : none.inequalities) CHECK(r.worst_ratio == 0.0);
    const auto rep = verify_embeddings(200, spec, k, 9);
    CHECK(rep.lambda_above_floor);
    for (const auto& r : rep.inequalities) {
        INFO(r.name);
        CHECK(r.samples == 200);
        CHECK(r.worst_ratio <= 1.0 + 1e-8);
    }
    CHECK(rep.find("h_alpha_control") != nullptr);
    CHECK(rep.to_json().find("argmax_sample_id") != std::string::npos);
}

TEST_CASE("a violated embedding aborts with a replayable sample") {
    auto k = make_embedding_constants(spec, 2000);
    k.c_infinity *= 0.5;
    try {
        verify_embeddings(50, spec, k, 9);
        FAIL("expected a violation");
    } catch (const HypothesisViolation& v) {
        CHECK(v.hypothesis() == "sup_embedding");
        CHECK(v.witness().find("\"sample_id\"") != std::string::npos);
        CHECK(v.witness().find("\"values\"") != std::string::npos);
    }
}

TEST_CASE("samples replay from seed and id") {
    CHECK(sample_line(spec.grid, 2, 5, 17) == sample_line(spec.grid, 2, 5, 17));
    CHECK_FALSE(sample_line(spec.grid, 1, 5, 17) == sample_line(spec.grid, 1, 6, 17));
    const auto v = sample_interval(IntervalGrid(0.0, 1.0, 65), 1, 5, 4);
    CHECK(v(0, 0) == 0.0);
    CHECK(v(64, 0) == 0.0);
    CHECK(v.interval().dirichlet());
}
