#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fracmp/mpa.hpp"
#include "fracmp/problem.hpp"
#include "fracmp/spaces.hpp"

namespace fracmp {

/// \int_{|t| > varrho} |u|^2 / \int |u|^2 on a line grid. Throws DomainError for u == 0.
double tail_mass_ratio(const GridFunction& u, double varrho);

struct EmbeddedSolution {
    GridFunction u;
    /// Largest distance between a line node inside the interval and the interval node it copies.
    double alignment_error;
};

/// Zero extension of an interval function onto a line grid, nearest-node sampling inside.
EmbeddedSolution embed_interval_solution(const GridFunction& interval_u, const RealLineGrid& line);

struct SweepRecord {
    double lambda = 0.0;
    double level = 0.0;
    double residual = 0.0;
    double cerami = 0.0;
    std::size_t iterations = 0;
    double tail_mass_ratio = 0.0;
    double dist_to_bvp_h_alpha = 0.0;
    bool converged = false;
    /// ||u||_X^2 and \int (grad W(t, u), u), which agree at critical points.
    double x_norm_sq = 0.0;
    double nonlinear_action = 0.0;
    bool c6_holds = false;
    double h_identity_gap = 0.0;
    std::optional<GridFunction> u;
};

struct SweepOptions {
    bool cold = false;
    std::size_t bvp_points = 401;
    /// Support half-width of psi as a fraction of varrho.
    double tau_fraction = 0.9;
    std::size_t c_infinity_samples = 10000;
    std::uint64_t seed = 0xc1f;
    /// Abort with both records serialized when tail mass or distance fails to decrease.
    bool assert_monotone = true;
    double identity_tol = 1e-6;
};

struct SweepReport {
    std::vector<SweepRecord> records;
    SolveResult bvp_reference;
    double ctilde = 0.0;
    double eta = 0.0;
    double rho = 0.0;
    double alignment_error = 0.0;
    std::string config_hash;
    EmbeddingConstants constants;
    /// Smallest lambda of the grid at which the solve converged and all identities held.
    std::optional<double> observed_threshold;
    bool tail_decreasing = false;
    bool distance_decreasing = false;

    std::string to_json() const;
};

SweepReport lambda_sweep(const ProblemSpec& base, const std::vector<double>& lambdas, const MpaConfig& config,
                         const SweepOptions& options = {}, const std::string& config_hash = "");

std::string record_json(const SweepRecord& r);

/// Result payload: grid metadata, summary, trace and values. Deterministic for fixed inputs.
std::string solve_result_json(const SolveResult& r, const std::string& command, double lambda,
                              const std::string& config_hash);
/// Columns t,abs_u.
std::string solution_csv(const SolveResult& r);
/// Columns iteration,level,residual,step.
std::string trace_csv(const SolveResult& r);
/// Columns lambda,level,residual,cerami_residual,tail_mass_ratio,dist_to_bvp_h_alpha,converged.
std::string sweep_csv(const SweepReport& r);

struct CampaignBudgets {
    std::size_t embedding_samples = 1000;
    std::size_t nonlinearity_samples = 100000;
    std::size_t functional_samples = 50;
    std::size_t c_infinity_samples = 10000;
    std::uint64_t seed = 0xe3b;
};

struct CampaignReport {
    std::vector<Check> checks;
    std::string embedding_json;
    std::string constants_json;
    bool passed() const;
    std::string to_json() const;
};

/**
 * Runs the hypothesis validators, the embedding verifier (at lambda and at lambda_floor when
 * lambda is below it) and spot checks of the functional identities. A zero budget everywhere
 * gives an empty report. Violations are recorded as failed checks, never thrown.
 */
CampaignReport run_verification_campaign(const ProblemSpec& spec, const CampaignBudgets& budgets);

} // namespace fracmp
