// Command-line front end: solve, bvp, sweep, verify and bound.

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "fracmp/config.hpp"
#include "fracmp/errors.hpp"
#include "fracmp/fracops.hpp"
#include "fracmp/functional.hpp"
#include "fracmp/mpa.hpp"
#include "fracmp/runner.hpp"
#include "fracmp/spaces.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace fracmp;

namespace {

struct Options {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::string out = "run";
    std::string metric;
    std::optional<double> lambda;
    std::string lambdas;
    bool cold = false;
    std::size_t points = 0;
};

void write(const fs::path& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot write " + path.string());
    f << text;
    if (text.empty() || text.back() != '\n') f << '\n';
}

std::string timestamp() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw ConfigError("bad number '" + item + "' in --lambdas");
        }
    }
    if (out.empty()) throw ConfigError("--lambdas is empty");
    return out;
}

RunConfig resolve(const Options& o) {
    RunConfig c = o.config.empty() ? default_config() : load_config(o.config);
    if (o.seed) apply_seed(c, *o.seed);
    if (o.lambda) {
        if (!(*o.lambda > 0.0)) throw ConfigError("--lambda must be positive");
        c.problem.lambda = *o.lambda;
    }
    if (!o.metric.empty()) {
        c.mpa.metric = parse_metric(o.metric);
        c.sweep_metric = c.mpa.metric;
    }
    if (!o.lambdas.empty()) c.lambdas = parse_list(o.lambdas);
    if (o.cold) c.sweep.cold = true;
    if (o.points > 0) c.sweep.bvp_points = o.points;
    return c;
}

void write_result(const fs::path& dir, const SolveResult& r, const std::string& command, double lambda,
                  const std::string& hash) {
    auto payload = json::parse(solve_result_json(r, command, lambda, hash));
    payload["timestamp"] = timestamp();
    write(dir / "result.json", payload.dump(2));
    write(dir / "u.csv", solution_csv(r));
    write(dir / "trace.csv", trace_csv(r));
}

json setup_json(const MountainPassSetup& s) {
    return {{"tau", s.tau}, {"sigma0", s.sigma0}, {"rho", s.rho}, {"eta", s.eta},
            {"epsilon_c", s.epsilon_c}, {"c_eps", s.c_eps}};
}

json checks_json(const ValidationReport& r) {
    json list = json::array();
    for (const auto& c : r.checks) list.push_back({{"name", c.name}, {"passed", c.passed}, {"observed", c.observed}, {"detail", c.detail}});
    return list;
}

int run_solve(const RunConfig& c, const fs::path& dir) {
    const auto& spec = c.problem;
    const auto k = make_embedding_constants(spec, c.budgets.c_infinity_samples, c.sweep.seed);
    const auto setup = construct_e(spec, k, c.sweep.tau_fraction * spec.potential.varrho);
    const double ctilde = ctilde_bound(setup, spec);
    const auto r = mpa_solve(spec, setup, c.mpa);
    const auto ident = h_identity(*r.u, spec);
    const auto hash = config_hash(c);
    write_result(dir, r, "solve", spec.lambda, hash);
    json report{{"config_hash", hash},
                {"constants", json::parse(to_json(k))},
                {"lambda_above_floor", spec.lambda >= k.lambda_floor},
                {"setup", setup_json(setup)},
                {"ctilde", ctilde},
                {"level_within_bounds", r.level > 0.0 && r.level <= ctilde + 1e-6},
                {"h_identity", {{"lhs", ident.lhs}, {"rhs", ident.rhs}, {"gap", ident.gap}}},
                {"potential_checks", checks_json(validate_potential(spec.potential, spec.grid, k))}};
    write(dir / "report.json", report.dump(2));
    std::cout << "level " << r.level << "  residual " << r.residual << "  iterations " << r.iterations
              << (r.converged ? "  converged" : "  NOT converged: " + r.diagnostics) << "\n";
    return r.converged ? 0 : 1;
}

int run_bvp(const RunConfig& c, const fs::path& dir) {
    const auto r = bvp_solve(c.problem, c.sweep.bvp_points, c.mpa);
    const IntervalProblem problem(c.problem, c.sweep.bvp_points);
    const auto hash = config_hash(c);
    write_result(dir, r, "bvp", 0.0, hash);
    const auto& u = *r.u;
    json report{{"config_hash", hash},
                {"euler_lagrange_residual", problem.euler_lagrange_residual(u)},
                {"dirichlet_exact", u(0, 0) == 0.0 && u(u.nodes() - 1, 0) == 0.0}};
    write(dir / "report.json", report.dump(2));
    std::cout << "level " << r.level << "  residual " << r.residual << (r.converged ? "  converged" : "  NOT converged") << "\n";
    return r.converged ? 0 : 1;
}

int run_sweep(const RunConfig& c, const fs::path& dir) {
    auto mpa = c.mpa;
    mpa.metric = c.sweep_metric;
    auto opts = c.sweep;
    opts.assert_monotone = false;
    const auto hash = config_hash(c);
    const auto r = lambda_sweep(c.problem, c.lambdas, mpa, opts, hash);
    write(dir / "report.json", json::parse(r.to_json()).dump(2));
    write(dir / "sweep.csv", sweep_csv(r));
    for (const auto& rec : r.records) {
        std::cout << "lambda " << rec.lambda << "  level " << rec.level << "  tail " << rec.tail_mass_ratio
                  << "  dist " << rec.dist_to_bvp_h_alpha << (rec.converged ? "" : "  NOT converged") << "\n";
    }
    return r.tail_decreasing && r.distance_decreasing ? 0 : 1;
}

int run_verify(const RunConfig& c, const fs::path& dir) {
    const auto r = run_verification_campaign(c.problem, c.budgets);
    write(dir / "report.json", json::parse(r.to_json()).dump(2));
    for (const auto& chk : r.checks) {
        if (!chk.passed) std::cout << "FAIL " << chk.name << ": " << chk.detail << " " << chk.witness << "\n";
    }
    std::cout << (r.passed() ? "all checks passed" : "verification failed") << " (" << r.checks.size() << " checks)\n";
    return r.passed() ? 0 : 1;
}

int run_bound(const RunConfig& c, const fs::path& dir) {
    const auto& spec = c.problem;
    const auto k = make_embedding_constants(spec, c.budgets.c_infinity_samples, c.sweep.seed);
    const auto setup = construct_e(spec, k, c.sweep.tau_fraction * spec.potential.varrho);
    const double ctilde = ctilde_bound(setup, spec);
    json report{{"config_hash", config_hash(c)}, {"ctilde", ctilde}, {"setup", setup_json(setup)},
                {"constants", json::parse(to_json(k))}};
    write(dir / "report.json", report.dump(2));
    std::cout << "ctilde " << ctilde << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Mountain-pass solver for fractional Hamiltonian systems with a vanishing potential well"};
    app.require_subcommand(1);
    Options o;

    const auto common = [&](CLI::App* sub) {
        sub->add_option("--config", o.config, "JSON configuration file")->check(CLI::ExistingFile);
        sub->add_option("--seed", o.seed, "seed for every randomized component");
        sub->add_option("--out", o.out, "run directory")->capture_default_str();
        sub->add_option("--metric", o.metric, "gradient metric: h-alpha or x-alpha-lambda");
    };
    auto* solve = app.add_subcommand("solve", "mountain-pass solution at one lambda");
    common(solve);
    solve->add_option("--lambda", o.lambda, "potential strength");
    auto* bvp = app.add_subcommand("bvp", "Dirichlet problem on [-varrho, varrho]");
    common(bvp);
    bvp->add_option("--points", o.points, "interval grid points");
    auto* sweep = app.add_subcommand("sweep", "concentration study over increasing lambda");
    common(sweep);
    sweep->add_option("--lambdas", o.lambdas, "comma-separated, strictly increasing");
    sweep->add_flag("--cold", o.cold, "no warm start between lambdas");
    sweep->add_option("--points", o.points, "interval grid points of the reference solution");
    auto* verify = app.add_subcommand("verify", "hypothesis and embedding verification campaign");
    common(verify);
    verify->add_option("--lambda", o.lambda, "potential strength");
    auto* bound = app.add_subcommand("bound", "lambda-independent upper bound on the level");
    common(bound);
    bound->add_option("--lambda", o.lambda, "potential strength");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        const auto config = resolve(o);
        const fs::path dir(o.out);
        fs::create_directories(dir);
        if (solve->parsed()) return run_solve(config, dir);
        if (bvp->parsed()) return run_bvp(config, dir);
        if (sweep->parsed()) return run_sweep(config, dir);
        if (verify->parsed()) return run_verify(config, dir);
        return run_bound(config, dir);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const DomainError& e) {
        std::cerr << "invalid parameter: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
