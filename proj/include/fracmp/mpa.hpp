#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fracmp/functional.hpp"
#include "fracmp/grid.hpp"
#include "fracmp/problem.hpp"
#include "fracmp/spaces.hpp"

namespace fracmp {

/**
 * An energy of the form I(u) = 1/2 ||u||^2 - \int W(t, u) with a Hilbert norm ||.|| and a
 * metric for gradient representatives. Implemented for the truncated line and for the
 * Dirichlet interval.
 */
class Landscape {
public:
    virtual ~Landscape() = default;
    virtual double energy(const GridFunction& u) const = 0;
    /// 1/2 ||u||^2
    virtual double quadratic(const GridFunction& u) const = 0;
    virtual GridFunction gradient(const GridFunction& u) const = 0;
    virtual double metric_norm(const GridFunction& g) const = 0;
    /// Quadrature weight times g(t_j) at every node, for fast evaluation along rays.
    virtual const std::vector<double>& nonlinear_weights() const = 0;
    virtual const NonlinearitySpec& nonlinearity() const = 0;
    virtual std::string metric_name() const = 0;
};

class LineLandscape final : public Landscape {
public:
    LineLandscape(ProblemSpec spec, Metric metric = Metric::h_alpha, CgOptions cg = {});
    double energy(const GridFunction& u) const override;
    double quadratic(const GridFunction& u) const override;
    GridFunction gradient(const GridFunction& u) const override;
    double metric_norm(const GridFunction& g) const override;
    const std::vector<double>& nonlinear_weights() const override { return weights_; }
    const NonlinearitySpec& nonlinearity() const override { return spec_.nonlinearity; }
    std::string metric_name() const override;

private:
    ProblemSpec spec_;
    Metric metric_;
    CgOptions cg_;
    std::vector<double> weights_;
};

class IntervalLandscape final : public Landscape {
public:
    explicit IntervalLandscape(std::shared_ptr<const IntervalProblem> problem);
    double energy(const GridFunction& u) const override { return problem_->energy(u); }
    double quadratic(const GridFunction& u) const override { return problem_->quadratic_part(u); }
    GridFunction gradient(const GridFunction& u) const override { return problem_->gradient(u); }
    double metric_norm(const GridFunction& g) const override { return problem_->metric_norm(g); }
    const std::vector<double>& nonlinear_weights() const override { return weights_; }
    const NonlinearitySpec& nonlinearity() const override { return problem_->spec().nonlinearity; }
    std::string metric_name() const override { return "interval-h-alpha"; }

private:
    std::shared_ptr<const IntervalProblem> problem_;
    std::vector<double> weights_;
};

/// Maximum of s -> I(s v) over s > 0.
struct RayMaximum {
    double s;
    double level;
};
/// hint > 0 restricts the search to the local maximum nearest s = hint; otherwise the global
/// maximum over a geometric scan is returned. Throws GeometryError if I(s v) never turns negative.
RayMaximum maximize_on_ray(const Landscape& landscape, const GridFunction& v, double hint = 0.0);

struct MountainPassSetup {
    GridFunction psi;
    double tau;
    double sigma0;
    GridFunction e;
    double rho;
    double eta;
    double epsilon_c;
    double c_eps;
};

struct RhoEta {
    double rho;
    double eta;
};

/**
 * Largest rho on a log grid over [1e-8, 1e4] (200 points per decade) with
 *   b(rho) = (1 - eps/theta)/2 - C_eps / (p theta^{p/2} m^{(p-2)/2}) rho^{p-2} > 0
 * and eta = rho^2 b(rho). Throws GeometryError when eps >= theta or no grid point qualifies.
 */
RhoEta estimate_rho_eta(double theta, double meas_lc, double epsilon_c, double c_eps, double p);
/// Same with theta and meas from the constants and p the growth exponent of the nonlinearity.
RhoEta estimate_rho_eta(const ProblemSpec& spec, const EmbeddingConstants& constants, double epsilon_c,
                        double c_eps);

/// psi(t) = (1 - (t/tau)^2)^3 on (-tau, tau) in the first component.
GridFunction bump_direction(const Grid& grid, std::size_t dim, double tau);

/**
 * Builds psi with support in (-tau, tau) and doubles sigma from 1 until I(sigma psi) < 0 and
 * ||sigma psi||_X > rho. epsilon_c defaults to theta/2 and c_eps to growth_constant.
 * Throws ConfigError past sigma = 2^60.
 */
MountainPassSetup construct_e(const ProblemSpec& spec, const EmbeddingConstants& constants, double tau,
                              std::optional<double> epsilon_c = std::nullopt,
                              std::optional<double> c_eps = std::nullopt);

/// max over sigma of 1/2 sigma^2 Q_alpha(psi) - \int W(sigma psi); independent of lambda.
double ctilde_bound(const MountainPassSetup& setup, const ProblemSpec& spec);

struct TraceEntry {
    std::size_t iteration;
    double level;
    double residual;
    double step;
};

struct PathState {
    std::vector<GridFunction> nodes;
    std::vector<double> energies;
    std::size_t argmax = 0;
};

struct MpaConfig {
    std::size_t path_nodes = 21;
    double tol = 1e-6;
    std::size_t max_iters = 5000;
    Metric metric = Metric::h_alpha;
    CgOptions cg{};
    double initial_step = 1.0;
    double armijo = 1e-4;
    double step_floor = 1e-12;
    /// Extra runs from randomly perturbed end points; the lowest converged level is kept.
    std::size_t restarts = 0;
    std::uint64_t seed = 0x6d7061;
    /// Called after every accepted iteration.
    std::function<void(const TraceEntry&)> observer{};

    void validate() const;
};

struct SolveResult {
    std::optional<GridFunction> u;
    double level = 0.0;
    /// Metric norm of the gradient at u.
    double residual = 0.0;
    /// (1 + ||u||) * residual, the stopping quantity.
    double cerami = 0.0;
    double norm = 0.0;
    std::size_t iterations = 0;
    std::vector<TraceEntry> trace;
    bool converged = false;
    std::string metric;
    std::string diagnostics;
    PathState path;
};

/**
 * Mountain-pass level by deforming the path 0 -> e. The path is kept in the form
 * "ray through w up to its peak, then a connector at negative energy to e", so its maximum is
 * the peak of the ray through w. Each iteration moves the peak point w against the gradient
 * with Armijo backtracking on the peak level, so the level never increases. Starts from the
 * segment to e (level = ctilde_bound when supp psi lies in T) unless `warm` gives a lower one.
 */
SolveResult mpa_solve(const ProblemSpec& spec, const MountainPassSetup& setup, const MpaConfig& config = {},
                      const std::optional<GridFunction>& warm = std::nullopt);

/// The same iteration on a general landscape.
SolveResult mountain_pass(const Landscape& landscape, const GridFunction& e, const MpaConfig& config,
                          const std::optional<GridFunction>& warm = std::nullopt);

/// Dirichlet problem on [-varrho, varrho] with num_points nodes.
SolveResult bvp_solve(const ProblemSpec& spec, std::size_t num_points = 401, const MpaConfig& config = {});

/// Discrete path 0 -> ray peak of w -> e with `nodes` nodes; endpoints are 0 and e exactly.
PathState materialize_path(const Landscape& landscape, const GridFunction& w, const GridFunction& e,
                           std::size_t nodes);

} // namespace fracmp
