#include "doctest.h"

#include <cmath>
#include <vector>

#include "fracmp/config.hpp"
#include "fracmp/errors.hpp"
#include "fracmp/problem.hpp"
#include "fracmp/spaces.hpp"

using namespace fracmp;

TEST_CASE("radial profiles and their derivatives") {
    const auto pure = NonlinearitySpec::pure_power(4.0);
    CHECK(radial(2.0, pure).w == 16.0);
    CHECK(radial(2.0, pure).dw == 32.0);
    CHECK(radial(0.0, pure).w == 0.0);
    const auto osc = NonlinearitySpec::oscillatory(4.0, 0.5);
    for (double r : {0.01, 0.3, 1.0, 7.0, 40.0}) {
        const double h = 1e-6 * r;
        const double fd = (radial(r + h, osc).w - radial(r - h, osc).w) / (2.0 * h);
        CHECK(radial(r, osc).dw == doctest::Approx(fd).epsilon(1e-7));
    }
}

TEST_CASE("gradient of W is radial and H is the defect") {
    const auto w = NonlinearitySpec::pure_power(4.0, WeightProfile{1.0, 0.5, 2.0});
    const std::vector<double> u{0.3, -0.4};
    const auto g = eval_grad_w(0.25, u, w);
    const double gt = w.g(0.25);
    CHECK(g[0] == doctest::Approx(4.0 * gt * 0.25 * 0.3));
    CHECK(g[1] == doctest::Approx(4.0 * gt * 0.25 * -0.4));
    CHECK(eval_h(0.25, u, w) == doctest::Approx(gt * 0.0625));
    const std::vector<double> zero{0.0, 0.0};
    CHECK(eval_grad_w(1.0, zero, w)[0] == 0.0);
}

TEST_CASE("pure power growth constant is tight") {
    const auto w = NonlinearitySpec::pure_power(4.0);
    CHECK(w.sigma == 2.0);
    CHECK(w.growth_exponent() == doctest::Approx(4.0));
    const auto r = validate_nonlinearity(w, 20000);
    CHECK(r.passed());
    CHECK(r.find("growth_bound")->observed == doctest::Approx(16.0).epsilon(1e-12));
}

TEST_CASE("shipped families pass every check") {
    for (const auto& w : {NonlinearitySpec::pure_power(3.0), NonlinearitySpec::pure_power(6.0, WeightProfile{2.0, 1.0, 3.0}),
                          NonlinearitySpec::oscillatory(4.0, 0.5), NonlinearitySpec::oscillatory(3.0, 0.25)}) {
        const auto r = validate_nonlinearity(w, 100000);
        for (const auto& c : r.checks) {
            INFO(w.family() << " " << c.name << " " << c.detail);
            CHECK(c.passed);
        }
        const std::vector<double> eps{0.1, 1.0};
        CHECK(validate_growth_bounds(w, eps).passed());
    }
}

TEST_CASE("quadratic W fails superquadratic growth with a witness") {
    const auto r = validate_nonlinearity(NonlinearitySpec::pure_power(2.0), 1000);
    const auto* c = r.find("superquadratic_growth");
    REQUIRE(c != nullptr);
    CHECK_FALSE(c->passed);
    CHECK_FALSE(c->witness.empty());
    CHECK_THROWS_AS(r.require(), HypothesisViolation);
}

TEST_CASE("too small c0 is reported with the tight constant") {
    auto w = NonlinearitySpec::pure_power(4.0);
    w.c0 = 10.0;
    const auto r = validate_nonlinearity(w, 100);
    CHECK_FALSE(r.find("growth_bound")->passed);
    CHECK(r.find("growth_bound")->observed == doctest::Approx(16.0));
}

TEST_CASE("growth constant of the pure power") {
    // sup_r (4 r^3 - eps r) / r^3 on the sampled range is just below 4.
    const auto w = NonlinearitySpec::pure_power(4.0);
    CHECK(growth_constant(w, 0.5) == doctest::Approx(4.0).epsilon(1e-6));
    CHECK(growth_constant(w, 0.5) < 4.0);
}

TEST_CASE("squared-distance potential") {
    const auto l = PotentialSpec::squared_distance(0.2, 0.4, 8.0, 2.0);
    CHECK(l.l(0.0) == 0.0);
    CHECK(l.l(0.2) == 0.0);
    CHECK(l.l(-0.2) == 0.0);
    CHECK(l.l(0.4) == doctest::Approx(2.0));
    CHECK(l.l(5.0) == 8.0);
    CHECK_THROWS_AS(PotentialSpec::squared_distance(0.2, 0.0, 1.0, 1.0), ConfigError);
    const auto m = eval_potential(0.4, l, 2);
    CHECK(m(0, 0) == doctest::Approx(2.0));
    CHECK(m(0, 1) == 0.0);
}

TEST_CASE("default potential is admissible and the unit-width example is not") {
    auto spec = default_problem();
    const auto k = make_embedding_constants(spec, 500);
    const auto r = validate_potential(spec.potential, spec.grid, k);
    CHECK(r.passed());
    // varrho = 1 with c = 1/4 has meas{l < c} = 3 > 1/C_inf^2 for every alpha in (1/2, 1).
    spec.potential = PotentialSpec::squared_distance(1.0, 1.0, 1.0, 0.25);
    CHECK_THROWS_AS(make_embedding_constants(spec, 500), HypothesisViolation);
    EmbeddingConstants forced = k;
    forced.meas_lc = sublevel_measure(spec.potential, spec.grid);
    const auto bad = validate_potential(spec.potential, spec.grid, forced);
    CHECK_FALSE(bad.find("sublevel_measure")->passed);
}

TEST_CASE("problem validation") {
    auto spec = default_problem();
    CHECK_NOTHROW(spec.validate());
    spec.alpha = 0.5;
    CHECK_THROWS_AS(spec.validate(), DomainError);
    spec.alpha = 0.75;
    spec.lambda = 0.0;
    CHECK_THROWS_AS(spec.validate(), DomainError);
    spec.lambda = 1.0;
    spec.potential.kind = PotentialSpec::Kind::diagonal;
    spec.potential.diag_scales = {0.5};
    CHECK_THROWS_AS(spec.validate(), ConfigError);
    CHECK(default_problem().with_lambda(7.0).lambda == 7.0);
}
