#include "fracmp/runner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "json.hpp"

#include "fracmp/errors.hpp"
#include "fracmp/fracops.hpp"
#include "fracmp/functional.hpp"
#include "fracmp/sampling.hpp"

namespace fracmp {

using nlohmann::json;

double tail_mass_ratio(const GridFunction& u, double varrho) {
    const auto& g = u.line();
    double inside = 0.0;
    double outside = 0.0;
    for (std::size_t j = 0; j < u.nodes(); ++j) {
        double m = 0.0;
        for (double v : u.node(j)) m += v * v;
        (std::abs(g.node(j)) > varrho ? outside : inside) += m;
    }
    if (inside + outside == 0.0) throw DomainError("tail mass ratio of the zero function is undefined");
    return outside / (inside + outside);
}

EmbeddedSolution embed_interval_solution(const GridFunction& interval_u, const RealLineGrid& line) {
    const auto& ig = interval_u.interval();
    GridFunction out(line, interval_u.dim());
    double align = 0.0;
    for (std::size_t j = 0; j < line.size(); ++j) {
        const double t = line.node(j);
        if (t < ig.a() || t > ig.b()) continue;
        const auto k = std::min(ig.size() - 1, static_cast<std::size_t>(std::lround((t - ig.a()) / ig.spacing())));
        align = std::max(align, std::abs(t - ig.node(k)));
        for (std::size_t c = 0; c < out.dim(); ++c) out(j, c) = interval_u(k, c);
    }
    return {std::move(out), align};
}

std::string record_json(const SweepRecord& r) {
    return json{{"lambda", r.lambda},
                {"level", r.level},
                {"residual", r.residual},
                {"cerami_residual", r.cerami},
                {"iterations", r.iterations},
                {"tail_mass_ratio", r.tail_mass_ratio},
                {"dist_to_bvp_h_alpha", r.dist_to_bvp_h_alpha},
                {"converged", r.converged},
                {"x_norm_sq", r.x_norm_sq},
                {"nonlinear_action", r.nonlinear_action},
                {"c6_holds", r.c6_holds},
                {"h_identity_gap", r.h_identity_gap}}
        .dump();
}

std::string SweepReport::to_json() const {
    json recs = json::array();
    for (const auto& r : records) recs.push_back(json::parse(record_json(r)));
    json out{{"records", recs},
             {"bvp_reference",
              {{"level", bvp_reference.level},
               {"residual", bvp_reference.residual},
               {"iterations", bvp_reference.iterations},
               {"converged", bvp_reference.converged}}},
             {"ctilde", ctilde},
             {"eta", eta},
             {"rho", rho},
             {"alignment_error", alignment_error},
             {"config_hash", config_hash},
             {"constants", json::parse(fracmp::to_json(constants))},
             {"tail_decreasing", tail_decreasing},
             {"distance_decreasing", distance_decreasing}};
    out["observed_threshold"] = observed_threshold ? json(*observed_threshold) : json(nullptr);
    return out.dump();
}

SweepReport lambda_sweep(const ProblemSpec& base, const std::vector<double>& lambdas, const MpaConfig& config,
                         const SweepOptions& options, const std::string& config_hash) {
    base.validate();
    if (lambdas.empty()) throw ConfigError("sweep needs at least one lambda");
    for (std::size_t i = 1; i < lambdas.size(); ++i) {
        if (!(lambdas[i] > lambdas[i - 1])) throw ConfigError("sweep lambdas must be strictly increasing");
    }
    SweepReport report;
    report.config_hash = config_hash;
    report.constants = make_embedding_constants(base, options.c_infinity_samples, options.seed);
    if (lambdas.front() < report.constants.lambda_floor) {
        throw DomainError("sweep lambda " + std::to_string(lambdas.front()) + " is below lambda_floor " +
                          std::to_string(report.constants.lambda_floor));
    }
    report.bvp_reference = bvp_solve(base, options.bvp_points, config);
    const auto reference = embed_interval_solution(*report.bvp_reference.u, base.grid);
    report.alignment_error = reference.alignment_error;
    const double tau = options.tau_fraction * base.potential.varrho;

    std::optional<GridFunction> previous;
    for (double lambda : lambdas) {
        const auto spec = base.with_lambda(lambda);
        SweepRecord rec;
        rec.lambda = lambda;
        const auto setup = construct_e(spec, report.constants, tau);
        if (report.records.empty()) {
            report.ctilde = ctilde_bound(setup, spec);
            report.eta = setup.eta;
            report.rho = setup.rho;
        }
        try {
            auto res = mpa_solve(spec, setup, config, options.cold ? std::nullopt : previous);
            rec.level = res.level;
            rec.residual = res.residual;
            rec.cerami = res.cerami;
            rec.iterations = res.iterations;
            rec.converged = res.converged;
            rec.u = std::move(res.u);
        } catch (const SolverError&) {
            rec.converged = false;
        } catch (const GeometryError&) {
            rec.converged = false;
        }
        if (rec.u) {
            const auto& u = *rec.u;
            rec.tail_mass_ratio = tail_mass_ratio(u, base.potential.varrho);
            const double minus = norm_h_alpha(u - reference.u, spec.alpha);
            const double plus = norm_h_alpha(u + reference.u, spec.alpha);
            rec.dist_to_bvp_h_alpha = std::min(minus, plus);
            rec.x_norm_sq = inner_x_lambda(u, u, spec);
            rec.nonlinear_action = l2_inner(nonlinear_gradient(u, spec.nonlinearity), u);
            rec.c6_holds = std::abs(rec.x_norm_sq - rec.nonlinear_action) <= options.identity_tol * (1.0 + rec.x_norm_sq);
            rec.h_identity_gap = h_identity(u, spec).gap;
        }
        if (rec.converged) {
            if (rec.level > report.ctilde + 1e-6) {
                throw InconsistencyError("level exceeds the ctilde bound: " + record_json(rec));
            }
            previous = rec.u;
            if (!report.observed_threshold && rec.c6_holds &&
                rec.h_identity_gap <= options.identity_tol * (1.0 + rec.level)) {
                report.observed_threshold = lambda;
            }
        }
        report.records.push_back(std::move(rec));
    }

    std::vector<const SweepRecord*> ok;
    for (const auto& r : report.records) {
        if (r.converged) ok.push_back(&r);
    }
    if (ok.empty()) throw SolverError("no solve in the sweep converged", std::numeric_limits<double>::infinity());
    report.tail_decreasing = true;
    report.distance_decreasing = true;
    for (std::size_t i = 1; i < ok.size(); ++i) {
        const bool tail = ok[i]->tail_mass_ratio < ok[i - 1]->tail_mass_ratio;
        const bool dist = ok[i]->dist_to_bvp_h_alpha < ok[i - 1]->dist_to_bvp_h_alpha;
        report.tail_decreasing = report.tail_decreasing && tail;
        report.distance_decreasing = report.distance_decreasing && dist;
        if (options.assert_monotone && !(tail && dist)) {
            throw InconsistencyError("sweep is not monotone between records " + record_json(*ok[i - 1]) + " and " +
                                     record_json(*ok[i]));
        }
    }
    return report;
}

bool CampaignReport::passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

std::string CampaignReport::to_json() const {
    json list = json::array();
    for (const auto& c : checks) {
        json item{{"name", c.name}, {"passed", c.passed}, {"observed", c.observed}, {"detail", c.detail}};
        item["witness"] = c.witness.empty() ? json(nullptr) : json::parse(c.witness);
        list.push_back(item);
    }
    json out{{"passed", passed()}, {"checks", list}};
    out["embeddings"] = embedding_json.empty() ? json(nullptr) : json::parse(embedding_json);
    out["constants"] = constants_json.empty() ? json(nullptr) : json::parse(constants_json);
    return out.dump();
}

namespace {

void append(CampaignReport& out, const ValidationReport& r) {
    for (const auto& c : r.checks) out.checks.push_back(c);
}

void embedding_checks(CampaignReport& out, const ProblemSpec& spec, const EmbeddingConstants& k,
                      const CampaignBudgets& b, const std::string& tag) {
    try {
        const auto rep = verify_embeddings(b.embedding_samples, spec, k, b.seed);
        for (const auto& r : rep.inequalities) {
            out.checks.push_back({r.name + tag, r.worst_ratio <= 1.0 + 1e-8, r.worst_ratio,
                                  "worst lhs/rhs over " + std::to_string(r.samples) + " samples", ""});
        }
        if (out.embedding_json.empty()) out.embedding_json = rep.to_json();
    } catch (const HypothesisViolation& v) {
        out.checks.push_back({v.hypothesis() + tag, false, std::numeric_limits<double>::infinity(),
                              "inequality violated", v.witness()});
    }
}

void functional_checks(CampaignReport& out, const ProblemSpec& spec, const CampaignBudgets& b) {
    Check fd{"derivative_finite_difference", true, 0.0, "central differences at h = 1e-5", ""};
    Check hid{"h_identity", true, 0.0, "I(u) - I'(u)u/2 = \\int H", ""};
    Check mono{"energy_lambda_monotone", true, 0.0, "I nondecreasing in lambda", ""};
    const double h = 1e-5;
    for (std::uint64_t id = 0; id < b.functional_samples; ++id) {
        const auto u = sample_line(spec.grid, spec.dim, b.seed, 2 * id);
        const auto v = sample_line(spec.grid, spec.dim, b.seed, 2 * id + 1);
        const double da = derivative_action(u, v, spec);
        auto up = u;
        up.axpy(h, v);
        auto um = u;
        um.axpy(-h, v);
        const double num = (energy(up, spec) - energy(um, spec)) / (2.0 * h);
        const double rel = std::abs(num - da) / std::max(std::abs(da), 1e-3);
        fd.observed = std::max(fd.observed, rel);
        if (rel > 1e-6 && fd.passed) {
            fd.passed = false;
            fd.witness = json{{"seed", b.seed}, {"u_id", 2 * id}, {"v_id", 2 * id + 1}, {"fd", num}, {"action", da}}.dump();
        }
        const auto ident = h_identity(u, spec);
        const double gap = ident.gap / (1.0 + std::abs(ident.lhs));
        hid.observed = std::max(hid.observed, gap);
        if (gap > 1e-10 && hid.passed) {
            hid.passed = false;
            hid.witness = json{{"seed", b.seed}, {"u_id", 2 * id}, {"lhs", ident.lhs}, {"rhs", ident.rhs}}.dump();
        }
        const double e1 = energy(u, spec);
        const double e2 = energy(u, spec.with_lambda(10.0 * spec.lambda));
        if (e2 < e1 && mono.passed) {
            mono.passed = false;
            mono.witness = json{{"seed", b.seed}, {"u_id", 2 * id}, {"energy", e1}, {"energy_10x", e2}}.dump();
        }
    }
    out.checks.push_back(fd);
    out.checks.push_back(hid);
    out.checks.push_back(mono);
}

} // namespace

CampaignReport run_verification_campaign(const ProblemSpec& spec, const CampaignBudgets& b) {
    spec.validate();
    CampaignReport out;
    if (b.nonlinearity_samples > 0) {
        append(out, validate_nonlinearity(spec.nonlinearity, b.nonlinearity_samples, b.seed));
        const std::vector<double> eps{0.1, 0.5, 1.0};
        append(out, validate_growth_bounds(spec.nonlinearity, eps));
    }
    if (b.c_infinity_samples > 0) {
        std::optional<EmbeddingConstants> k;
        try {
            k = make_embedding_constants(spec, b.c_infinity_samples, b.seed);
        } catch (const HypothesisViolation& v) {
            out.checks.push_back({"sublevel_measure", false, std::numeric_limits<double>::infinity(),
                                  "meas{l < c} >= 1/C_inf^2", v.witness()});
        }
        if (k) {
            out.constants_json = to_json(*k);
            append(out, validate_potential(spec.potential, spec.grid, *k));
            if (b.embedding_samples > 0) {
                embedding_checks(out, spec, *k, b, "");
                if (spec.lambda < k->lambda_floor) {
                    embedding_checks(out, spec.with_lambda(k->lambda_floor), *k, b, "_at_floor");
                }
            }
        }
    }
    if (b.functional_samples > 0) functional_checks(out, spec, b);
    return out;
}

} // namespace fracmp

namespace fracmp {

namespace {

json grid_json(const Grid& g) {
    if (const auto* line = std::get_if<RealLineGrid>(&g)) {
        return {{"kind", "line"}, {"halfwidth", line->halfwidth()}, {"points", line->size()}};
    }
    const auto& iv = std::get<IntervalGrid>(g);
    return {{"kind", "interval"}, {"a", iv.a()}, {"b", iv.b()}, {"points", iv.size()}};
}

std::string number(double v) { return json(v).dump(); }

} // namespace

std::string solve_result_json(const SolveResult& r, const std::string& command, double lambda,
                              const std::string& config_hash) {
    json trace = json::array();
    for (const auto& t : r.trace) trace.push_back({t.iteration, t.level, t.residual, t.step});
    json out{{"command", command},
             {"config_hash", config_hash},
             {"lambda", lambda},
             {"level", r.level},
             {"residual", r.residual},
             {"cerami_residual", r.cerami},
             {"norm", r.norm},
             {"iterations", r.iterations},
             {"converged", r.converged},
             {"metric", r.metric},
             {"diagnostics", r.diagnostics},
             {"trace_columns", {"iteration", "level", "residual", "step"}},
             {"trace", trace}};
    if (r.u) {
        out["grid"] = grid_json(r.u->grid());
        out["dim"] = r.u->dim();
        out["values"] = std::vector<double>(r.u->values().begin(), r.u->values().end());
    }
    return out.dump();
}

std::string solution_csv(const SolveResult& r) {
    std::string out = "t,abs_u\n";
    if (!r.u) return out;
    for (std::size_t j = 0; j < r.u->nodes(); ++j) {
        double m = 0.0;
        for (double v : r.u->node(j)) m += v * v;
        out += number(node_position(r.u->grid(), j)) + "," + number(std::sqrt(m)) + "\n";
    }
    return out;
}

std::string trace_csv(const SolveResult& r) {
    std::string out = "iteration,level,residual,step\n";
    for (const auto& t : r.trace) {
        out += std::to_string(t.iteration) + "," + number(t.level) + "," + number(t.residual) + "," + number(t.step) + "\n";
    }
    return out;
}

std::string sweep_csv(const SweepReport& r) {
    std::string out = "lambda,level,residual,cerami_residual,tail_mass_ratio,dist_to_bvp_h_alpha,converged\n";
    for (const auto& x : r.records) {
        out += number(x.lambda) + "," + number(x.level) + "," + number(x.residual) + "," + number(x.cerami) + "," +
               number(x.tail_mass_ratio) + "," + number(x.dist_to_bvp_h_alpha) + "," + (x.converged ? "1" : "0") + "\n";
    }
    return out;
}

} // namespace fracmp
