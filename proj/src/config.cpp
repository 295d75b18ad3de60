#include "fracmp/config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "fracmp/errors.hpp"

namespace fracmp {

using nlohmann::json;

ProblemSpec default_problem() {
    ProblemSpec s;
    s.alpha = 0.75;
    s.lambda = 10.0;
    s.potential = PotentialSpec::squared_distance(0.2, 0.4, 8.0, 2.0);
    s.nonlinearity = NonlinearitySpec::pure_power(4.0);
    return s;
}

RunConfig default_config() {
    RunConfig c;
    c.problem = default_problem();
    apply_seed(c, c.seed);
    return c;
}

void apply_seed(RunConfig& c, std::uint64_t seed) {
    c.seed = seed;
    c.mpa.seed = seed ^ 0x6d7061ull;
    c.sweep.seed = seed ^ 0xc1full;
    c.budgets.seed = seed ^ 0xe3bull;
}

Metric parse_metric(const std::string& name) {
    if (name == "h-alpha") return Metric::h_alpha;
    if (name == "x-alpha-lambda") return Metric::x_alpha_lambda;
    throw ConfigError("unknown metric '" + name + "' (expected h-alpha or x-alpha-lambda)");
}

std::string metric_name(Metric m) { return m == Metric::h_alpha ? "h-alpha" : "x-alpha-lambda"; }

std::string config_to_json(const RunConfig& c) {
    const auto& p = c.problem;
    const auto& w = p.nonlinearity;
    json out{
        {"schema_version", schema_version},
        {"seed", c.seed},
        {"problem",
         {{"alpha", p.alpha},
          {"lambda", p.lambda},
          {"dim", p.dim},
          {"grid", {{"halfwidth", p.grid.halfwidth()}, {"points", p.grid.size()}}},
          {"potential",
           {{"family", p.potential.family},
            {"varrho", p.potential.varrho},
            {"width", p.potential.width},
            {"height", p.potential.height},
            {"c", p.potential.c},
            {"diag_scales", p.potential.diag_scales}}},
          {"nonlinearity",
           {{"family", w.family()},
            {"p", w.p},
            {"epsilon", w.epsilon},
            {"weight", {{"mean", w.g.mean}, {"amplitude", w.g.amplitude}, {"period", w.g.period}}},
            {"sigma", w.sigma},
            {"c0", w.c0},
            {"radius", w.radius},
            {"tighten_c0", c.tighten_c0}}}}},
        {"mpa",
         {{"path_nodes", c.mpa.path_nodes},
          {"tol", c.mpa.tol},
          {"max_iters", c.mpa.max_iters},
          {"metric", metric_name(c.mpa.metric)},
          {"initial_step", c.mpa.initial_step},
          {"armijo", c.mpa.armijo},
          {"step_floor", c.mpa.step_floor},
          {"restarts", c.mpa.restarts},
          {"cg_tol", c.mpa.cg.tolerance},
          {"cg_max_iters", c.mpa.cg.max_iterations}}},
        {"sweep",
         {{"lambdas", c.lambdas},
          {"metric", metric_name(c.sweep_metric)},
          {"cold", c.sweep.cold},
          {"bvp_points", c.sweep.bvp_points},
          {"tau_fraction", c.sweep.tau_fraction}}},
        {"verify",
         {{"embedding_samples", c.budgets.embedding_samples},
          {"nonlinearity_samples", c.budgets.nonlinearity_samples},
          {"functional_samples", c.budgets.functional_samples},
          {"c_infinity_samples", c.budgets.c_infinity_samples}}}};
    return out.dump();
}

namespace {

// Every key of `user` must exist in `reference`; family-specific optional keys are nullable.
void check_keys(const json& user, const json& reference, const std::string& where) {
    if (!user.is_object()) throw ConfigError("'" + where + "' must be an object");
    for (const auto& [key, value] : user.items()) {
        if (!reference.contains(key)) throw ConfigError("unknown config key '" + where + key + "'");
        if (reference[key].is_object()) check_keys(value, reference[key], where + key + ".");
    }
}

template <typename T>
T get(const json& j, const char* key) {
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("bad value for '") + key + "': " + e.what());
    }
}

} // namespace

RunConfig parse_config(const std::string& text) {
    json user;
    try {
        user = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    const json reference = json::parse(config_to_json(default_config()));
    check_keys(user, reference, "");
    if (user.contains("schema_version") && user["schema_version"] != schema_version) {
        throw ConfigError("unsupported schema_version " + user["schema_version"].dump());
    }
    // Family defaults for sigma and c0 apply unless the user sets them.
    json merged = reference;
    merged["problem"]["nonlinearity"]["sigma"] = nullptr;
    merged["problem"]["nonlinearity"]["c0"] = nullptr;
    merged.merge_patch(user);

    RunConfig c;
    const auto& jp = merged["problem"];
    auto& p = c.problem;
    p.alpha = get<double>(jp, "alpha");
    p.lambda = get<double>(jp, "lambda");
    p.dim = get<std::size_t>(jp, "dim");
    p.grid = RealLineGrid(get<double>(jp["grid"], "halfwidth"), get<std::size_t>(jp["grid"], "points"));

    const auto& jl = jp["potential"];
    if (get<std::string>(jl, "family") != "squared-distance") {
        throw ConfigError("unknown potential family '" + get<std::string>(jl, "family") + "'");
    }
    c.potential_width = get<double>(jl, "width");
    c.potential_height = get<double>(jl, "height");
    p.potential = PotentialSpec::squared_distance(get<double>(jl, "varrho"), c.potential_width,
                                                  c.potential_height, get<double>(jl, "c"));
    p.potential.diag_scales = get<std::vector<double>>(jl, "diag_scales");
    if (!p.potential.diag_scales.empty()) p.potential.kind = PotentialSpec::Kind::diagonal;

    const auto& jw = jp["nonlinearity"];
    const WeightProfile g{get<double>(jw["weight"], "mean"), get<double>(jw["weight"], "amplitude"),
                          get<double>(jw["weight"], "period")};
    if (!(g.inf() > 0.0) || !(g.period > 0.0)) throw ConfigError("weight g must be positive with positive period");
    const auto family = get<std::string>(jw, "family");
    if (family == "pure-power") {
        p.nonlinearity = NonlinearitySpec::pure_power(get<double>(jw, "p"), g);
    } else if (family == "oscillatory") {
        const double pw = get<double>(jw, "p");
        const double eps = get<double>(jw, "epsilon");
        if (!(eps > 0.0 && eps < pw - 2.0)) throw ConfigError("oscillatory family needs 0 < epsilon < p - 2");
        p.nonlinearity = NonlinearitySpec::oscillatory(pw, eps, g);
    } else {
        throw ConfigError("unknown nonlinearity family '" + family + "'");
    }
    if (!jw["sigma"].is_null()) p.nonlinearity.sigma = get<double>(jw, "sigma");
    if (!jw["c0"].is_null()) p.nonlinearity.c0 = get<double>(jw, "c0");
    p.nonlinearity.radius = get<double>(jw, "radius");
    c.tighten_c0 = get<bool>(jw, "tighten_c0");
    try {
        p.validate();
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    }
    if (c.tighten_c0) {
        try {
            p.nonlinearity = tighten_growth_constant(p.nonlinearity);
        } catch (const DomainError& e) {
            throw ConfigError(e.what());
        }
    }

    const auto& jm = merged["mpa"];
    c.mpa.path_nodes = get<std::size_t>(jm, "path_nodes");
    c.mpa.tol = get<double>(jm, "tol");
    c.mpa.max_iters = get<std::size_t>(jm, "max_iters");
    c.mpa.metric = parse_metric(get<std::string>(jm, "metric"));
    c.mpa.initial_step = get<double>(jm, "initial_step");
    c.mpa.armijo = get<double>(jm, "armijo");
    c.mpa.step_floor = get<double>(jm, "step_floor");
    c.mpa.restarts = get<std::size_t>(jm, "restarts");
    c.mpa.cg.tolerance = get<double>(jm, "cg_tol");
    c.mpa.cg.max_iterations = get<std::size_t>(jm, "cg_max_iters");
    c.mpa.validate();

    const auto& js = merged["sweep"];
    c.lambdas = get<std::vector<double>>(js, "lambdas");
    c.sweep_metric = parse_metric(get<std::string>(js, "metric"));
    c.sweep.cold = get<bool>(js, "cold");
    c.sweep.bvp_points = get<std::size_t>(js, "bvp_points");
    c.sweep.tau_fraction = get<double>(js, "tau_fraction");
    if (!(c.sweep.tau_fraction > 0.0 && c.sweep.tau_fraction < 1.0)) throw ConfigError("tau_fraction must lie in (0, 1)");
    if (c.sweep.bvp_points < 5) throw ConfigError("bvp_points must be at least 5");

    const auto& jv = merged["verify"];
    c.budgets.embedding_samples = get<std::size_t>(jv, "embedding_samples");
    c.budgets.nonlinearity_samples = get<std::size_t>(jv, "nonlinearity_samples");
    c.budgets.functional_samples = get<std::size_t>(jv, "functional_samples");
    c.budgets.c_infinity_samples = get<std::size_t>(jv, "c_infinity_samples");
    c.sweep.c_infinity_samples = c.budgets.c_infinity_samples;

    apply_seed(c, get<std::uint64_t>(merged, "seed"));
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string config_hash(const RunConfig& config) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char ch : config_to_json(config)) {
        h ^= ch;
        h *= 0x100000001b3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

} // namespace fracmp
