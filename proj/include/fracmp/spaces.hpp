#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "fracmp/grid.hpp"
#include "fracmp/problem.hpp"

namespace fracmp {

double l2_inner(const GridFunction& u, const GridFunction& v);
double l2_norm(const GridFunction& u);

/// sqrt(||u||_{L^2}^2 + quadratic_form_alpha(u, alpha)) on a line grid.
double norm_h_alpha(const GridFunction& u, double alpha);

/// \int (L(t) u, v) dt
double potential_form(const GridFunction& u, const GridFunction& v, const PotentialSpec& potential);

/// (D^alpha u, D^alpha v) + lambda \int (L u, v)
double inner_x_lambda(const GridFunction& u, const GridFunction& v, const ProblemSpec& spec);
double norm_x_lambda(const GridFunction& u, const ProblemSpec& spec);

/// Sup-embedding constant sup |u|_inf / ||u||_alpha on a line grid.
struct CInfinityEstimate {
    /// Best ratio over the random samples alone.
    double random = 0.0;
    /// Ratio after ascending from the best sample along the Riesz representer of point evaluation.
    /// On the periodic grid this is the exact discrete supremum.
    double maximized = 0.0;
    std::size_t samples = 0;
    std::uint64_t seed = 0;
    std::uint64_t argmax_sample_id = 0;
};

CInfinityEstimate estimate_c_infinity(const RealLineGrid& grid, double alpha, std::size_t samples,
                                      std::uint64_t seed);

/// Measure of {t : l(t) < c} on the truncated line, as h times the number of such nodes.
double sublevel_measure(const PotentialSpec& potential, const RealLineGrid& grid);

/**
 * Constants derived from the estimated C_inf. All values are estimates.
 *   theta        = (1 - C^2 m) / (C^2 m)
 *   kappa_p^p    = 1 / (theta^{p/2} m^{(p-2)/2})
 *   lambda_floor = 1 / (c C^2 m)
 * with m = meas{l < c}.
 */
struct EmbeddingConstants {
    double c_infinity = 0.0;
    double c_infinity_random = 0.0;
    std::size_t samples = 0;
    double meas_lc = 0.0;
    double theta = 0.0;
    std::map<double, double> kappa_p;
    double lambda_floor = 0.0;
    /// Admissibility is decided with C_inf inflated by this factor.
    double gate_factor = 1.1;
    bool gated_admissible = false;
    /// 1/(gate C)^2 - m; positive when admissible.
    double margin = 0.0;
};

/// Throws HypothesisViolation when meas{l < c} >= 1/C_inf^2.
EmbeddingConstants make_embedding_constants(const ProblemSpec& spec, std::size_t samples = 10000,
                                            std::uint64_t seed = 0xc1f, std::vector<double> ps = {3.0, 4.0, 6.0});

std::string to_json(const EmbeddingConstants& k);

struct InequalityResult {
    std::string name;
    double worst_ratio = 0.0;
    std::uint64_t argmax_sample_id = 0;
    std::size_t samples = 0;
};

struct EmbeddingReport {
    std::vector<InequalityResult> inequalities;
    std::uint64_t seed = 0;
    double lambda = 0.0;
    bool lambda_above_floor = false;
    const InequalityResult* find(const std::string& name) const;
    std::string to_json() const;
};

/**
 * Evaluates both sides of every embedding inequality on `samples` random functions and
 * reports the worst ratio lhs/rhs per inequality. Interval inequalities use `interval`;
 * the X-norm inequalities are only evaluated when spec.lambda >= lambda_floor.
 * A ratio above 1 + 1e-8 throws HypothesisViolation carrying the sample for replay.
 */
EmbeddingReport verify_embeddings(std::size_t samples, const ProblemSpec& spec,
                                  const EmbeddingConstants& constants, std::uint64_t seed = 0xe3b,
                                  const IntervalGrid& interval = IntervalGrid(0.0, 1.0, 257, true));

/// Inequality sides for one line sample; exposed for tests.
struct SideValues {
    double lhs;
    double rhs;
};
/// ||u||_{L^p} and (b-a)^alpha / Gamma(alpha+1) ||D^alpha u||_{L^p} with the Grünwald derivative.
SideValues interval_lp_bound(const GridFunction& u, double alpha, double p);
/// sup |u| and (b-a)^{alpha-1/p} / (Gamma(alpha) ((alpha-1)q+1)^{1/q}) ||D^alpha u||_{L^p}; needs alpha > 1/p.
SideValues interval_sup_bound(const GridFunction& u, double alpha, double p);

} // namespace fracmp
