#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fracmp/mpa.hpp"
#include "fracmp/problem.hpp"
#include "fracmp/runner.hpp"

namespace fracmp {

inline constexpr int schema_version = 1;

/// Everything a CLI run depends on. Serialized as JSON; see README for the schema.
struct RunConfig {
    ProblemSpec problem;
    MpaConfig mpa;
    /// Metric used by sweeps; large lambda makes the h-alpha metric stiff.
    Metric sweep_metric = Metric::x_alpha_lambda;
    std::vector<double> lambdas{1.0, 10.0, 100.0, 1000.0};
    SweepOptions sweep;
    CampaignBudgets budgets;
    std::uint64_t seed = 1;
    /// Replace c0 by the validator's tight value at load time instead of taking it as given.
    bool tighten_c0 = false;
    /// Family parameters, kept for serialization.
    double potential_width = 0.4;
    double potential_height = 8.0;
};

/// Default problem: alpha = 0.75, lambda = 10, squared-distance potential
/// (varrho 0.2, width 0.4, height 8, c 2), W = |u|^4, grid of 4096 points on [-20, 20).
ProblemSpec default_problem();
RunConfig default_config();

/// Parses a JSON document; missing keys take defaults, unknown keys throw ConfigError.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);
/// Canonical JSON (sorted keys, every field present).
std::string config_to_json(const RunConfig& config);
/// FNV-1a 64 of the canonical JSON, as 16 hex digits.
std::string config_hash(const RunConfig& config);

/// Applies `seed` to every randomized component of the configuration.
void apply_seed(RunConfig& config, std::uint64_t seed);

Metric parse_metric(const std::string& name);
std::string metric_name(Metric m);

} // namespace fracmp
