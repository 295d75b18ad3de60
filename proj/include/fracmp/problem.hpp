#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "fracmp/grid.hpp"

namespace fracmp {

struct EmbeddingConstants;

/// Positive weight g(t) multiplying the nonlinearity: mean + amplitude * cos(2 pi t / period).
struct WeightProfile {
    double mean = 1.0;
    double amplitude = 0.0;
    double period = 1.0;

    double operator()(double t) const;
    double inf() const { return mean - std::abs(amplitude); }
    double sup() const { return mean + std::abs(amplitude); }
};

/**
 * Radial nonlinearity W(t, u) = g(t) w(|u|).
 *
 *   pure power:   w(r) = r^p
 *   oscillatory:  w(r) = r^p + (p - 2) r^{p - eps} sin^2(r^eps / eps),  0 < eps < p - 2
 *
 * sigma, c0 and radius are the constants of the growth hypothesis
 * |grad W|^sigma / |u|^sigma <= c0 H(t, u) for |u| >= radius.
 */
struct NonlinearitySpec {
    enum class Kind { pure_power, oscillatory };

    Kind kind = Kind::pure_power;
    double p = 4.0;
    double epsilon = 0.0;
    WeightProfile g{};
    double sigma = 2.0;
    double c0 = 16.0;
    double radius = 1.0;

    /// sigma = p/(p-2) (so that 2 sigma/(sigma-1) = p) and the closed-form tight c0.
    static NonlinearitySpec pure_power(double p, WeightProfile g = {});
    /// sigma = (p - eps)/(p - 2), the largest exponent for which the growth bound holds.
    static NonlinearitySpec oscillatory(double p, double eps, WeightProfile g = {});

    /// Exponent q = 2 sigma / (sigma - 1) of the subcritical growth bounds.
    double growth_exponent() const { return 2.0 * sigma / (sigma - 1.0); }
    std::string family() const;
};

/// w(r) and w'(r) of the radial profile (without the weight g).
struct RadialValue {
    double w;
    double dw;
};
RadialValue radial(double r, const NonlinearitySpec& spec);

double eval_w(double t, std::span<const double> u, const NonlinearitySpec& spec);
void eval_grad_w(double t, std::span<const double> u, const NonlinearitySpec& spec,
                 std::span<double> out);
std::vector<double> eval_grad_w(double t, std::span<const double> u, const NonlinearitySpec& spec);
/// H(t,u) = <grad W(t,u), u>/2 - W(t,u).
double eval_h(double t, std::span<const double> u, const NonlinearitySpec& spec);

/**
 * Potential L(t) = diag(scale_i) * l(t). The scalar kind has all scales 1; diagonal scales
 * must be >= 1 so that (L(t)u, u) >= l(t)|u|^2.
 */
struct PotentialSpec {
    enum class Kind { scalar, diagonal };

    Kind kind = Kind::scalar;
    std::function<double(double)> profile;
    double c = 1.0;
    double varrho = 1.0;
    std::pair<double, double> j_bounds{-1.0, 1.0};
    std::vector<double> diag_scales{};
    std::string family = "custom";
    /// Family parameters kept for serialization.
    double width = 1.0;
    double height = 1.0;

    /// l(t) = height * min(1, dist(t, [-varrho, varrho]) / width)^2.
    static PotentialSpec squared_distance(double varrho, double width, double height, double c);

    double l(double t) const { return profile(t); }
    double scale(std::size_t component) const;
    /// (L(t) u, v)
    double form(double t, std::span<const double> u, std::span<const double> v) const;
};

Eigen::MatrixXd eval_potential(double t, const PotentialSpec& spec, std::size_t dim);

/// alpha, lambda, potential, nonlinearity, truncated line grid and vector dimension.
struct ProblemSpec {
    double alpha = 0.75;
    double lambda = 10.0;
    PotentialSpec potential;
    NonlinearitySpec nonlinearity;
    RealLineGrid grid{20.0, 4096};
    std::size_t dim = 1;

    /// Throws DomainError unless alpha in (1/2, 1) and lambda > 0.
    void validate() const;
    ProblemSpec with_lambda(double lambda) const;
};

/// Outcome of one named hypothesis check.
struct Check {
    std::string name;
    bool passed = true;
    double observed = 0.0;
    std::string detail;
    /// JSON text of a witness point when the check fails.
    std::string witness;
};

struct ValidationReport {
    std::vector<Check> checks;
    bool passed() const;
    const Check* find(const std::string& name) const;
    /// Throws HypothesisViolation naming the first failed check.
    void require() const;
};

/**
 * Samples the hypotheses on W on fixed log grids of |u| and random (t, u):
 * vanishing gradient ratio near zero, W >= 0 and H >= 0, superquadratic growth of W/|u|^2,
 * and the growth bound with the configured c0 (reporting the tightest observed constant).
 * Asymptotic hypotheses are reported as "consistent with", never as proved.
 */
ValidationReport validate_nonlinearity(const NonlinearitySpec& spec, std::size_t sample_budget,
                                       std::uint64_t seed = 0x5eed);

/// Copy of `spec` with c0 replaced by 1.001 times the tightest value observed by the validator.
NonlinearitySpec tighten_growth_constant(const NonlinearitySpec& spec);

/// Smallest C_eps with |grad W| <= eps |u| + C_eps |u|^{q-1} on the sampled |u| range.
double growth_constant(const NonlinearitySpec& spec, double eps);

/// Checks the subcritical growth bounds with growth_constant for each eps.
ValidationReport validate_growth_bounds(const NonlinearitySpec& spec, std::span<const double> eps_values);

/**
 * Checks l >= 0 on a fine grid, l == 0 exactly on [-varrho, varrho], that the zero set is a
 * single nonempty bounded interval, and the smallness of meas{l < c} against the estimated
 * sup-embedding constant inflated by constants.gate_factor.
 */
ValidationReport validate_potential(const PotentialSpec& spec, const RealLineGrid& grid,
                                    const EmbeddingConstants& constants);

} // namespace fracmp
