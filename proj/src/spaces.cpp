#include "fracmp/spaces.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "json.hpp"

#include "fracmp/errors.hpp"
#include "fracmp/fracops.hpp"
#include "fracmp/sampling.hpp"

namespace fracmp {

using nlohmann::json;

double l2_inner(const GridFunction& u, const GridFunction& v) {
    require_same_space(u, v);
    const auto w = quadrature_weights(u.grid());
    double s = 0.0;
    for (std::size_t j = 0; j < u.nodes(); ++j) {
        double d = 0.0;
        for (std::size_t c = 0; c < u.dim(); ++c) d += u(j, c) * v(j, c);
        s += w[j] * d;
    }
    return s;
}

double l2_norm(const GridFunction& u) { return std::sqrt(l2_inner(u, u)); }

double norm_h_alpha(const GridFunction& u, double alpha) {
    return std::sqrt(l2_inner(u, u) + quadratic_form_alpha(u, alpha));
}

double potential_form(const GridFunction& u, const GridFunction& v, const PotentialSpec& potential) {
    require_same_space(u, v);
    const auto w = quadrature_weights(u.grid());
    double s = 0.0;
    for (std::size_t j = 0; j < u.nodes(); ++j) {
        s += w[j] * potential.form(node_position(u.grid(), j), u.node(j), v.node(j));
    }
    return s;
}

double inner_x_lambda(const GridFunction& u, const GridFunction& v, const ProblemSpec& spec) {
    require_same_space(u, v);
    return bilinear_form_alpha(u, v, spec.alpha) + spec.lambda * potential_form(u, v, spec.potential);
}

double norm_x_lambda(const GridFunction& u, const ProblemSpec& spec) {
    return std::sqrt(std::max(0.0, inner_x_lambda(u, u, spec)));
}

CInfinityEstimate estimate_c_infinity(const RealLineGrid& grid, double alpha, std::size_t samples,
                                      std::uint64_t seed) {
    require_order(alpha);
    CInfinityEstimate est;
    est.samples = samples;
    est.seed = seed;
    std::size_t best_node = grid.size() / 2;
    for (std::size_t id = 0; id < samples; ++id) {
        const auto u = sample_line(grid, 1, seed, id);
        const double nrm = norm_h_alpha(u, alpha);
        if (nrm == 0.0) continue;
        std::size_t arg = 0;
        double top = 0.0;
        for (std::size_t j = 0; j < u.nodes(); ++j) {
            if (std::abs(u(j, 0)) > top) {
                top = std::abs(u(j, 0));
                arg = j;
            }
        }
        if (top / nrm > est.random) {
            est.random = top / nrm;
            est.argmax_sample_id = id;
            best_node = arg;
        }
    }
    // Point evaluation at the best node is represented by G = (1 + K)^{-1} delta / h, and
    // |u(t_j)| <= sqrt(G_j) ||u||_alpha with equality at u = G.
    GridFunction delta(grid, 1);
    delta(best_node, 0) = 1.0 / grid.spacing();
    const auto g = solve_shifted_energy_operator(delta, alpha, 1.0);
    est.maximized = std::max(est.random, sup_norm(g) / norm_h_alpha(g, alpha));
    return est;
}

double sublevel_measure(const PotentialSpec& potential, const RealLineGrid& grid) {
    std::size_t count = 0;
    for (std::size_t j = 0; j < grid.size(); ++j) {
        if (potential.l(grid.node(j)) < potential.c) ++count;
    }
    return grid.spacing() * static_cast<double>(count);
}

EmbeddingConstants make_embedding_constants(const ProblemSpec& spec, std::size_t samples,
                                            std::uint64_t seed, std::vector<double> ps) {
    require_order(spec.alpha);
    const auto est = estimate_c_infinity(spec.grid, spec.alpha, samples, seed);
    EmbeddingConstants k;
    k.c_infinity = est.maximized;
    k.c_infinity_random = est.random;
    k.samples = samples;
    k.meas_lc = sublevel_measure(spec.potential, spec.grid);
    const double cm = k.c_infinity * k.c_infinity * k.meas_lc;
    if (!(k.meas_lc > 0.0) || !(cm < 1.0)) {
        throw HypothesisViolation(
            "sublevel_measure",
            json{{"meas_lc", k.meas_lc}, {"c_infinity", k.c_infinity}, {"bound", 1.0 / (k.c_infinity * k.c_infinity)}}
                .dump());
    }
    k.theta = (1.0 - cm) / cm;
    for (double p : ps) {
        const double kp = 1.0 / (std::pow(k.theta, 0.5 * p) * std::pow(k.meas_lc, 0.5 * (p - 2.0)));
        k.kappa_p[p] = std::pow(kp, 1.0 / p);
    }
    k.lambda_floor = 1.0 / (spec.potential.c * cm);
    const double gated = k.gate_factor * k.c_infinity;
    k.margin = 1.0 / (gated * gated) - k.meas_lc;
    k.gated_admissible = k.margin > 0.0;
    return k;
}

std::string to_json(const EmbeddingConstants& k) {
    json kp = json::object();
    for (const auto& [p, v] : k.kappa_p) kp[json(p).dump()] = v;
    return json{{"c_infinity", k.c_infinity},
                {"c_infinity_random_only", k.c_infinity_random},
                {"c_infinity_samples", k.samples},
                {"meas_lc", k.meas_lc},
                {"theta", k.theta},
                {"kappa_p", kp},
                {"lambda_floor", k.lambda_floor},
                {"gate_factor", k.gate_factor},
                {"gated_admissible", k.gated_admissible},
                {"margin", k.margin},
                {"estimated", true}}
        .dump();
}

const InequalityResult* EmbeddingReport::find(const std::string& name) const {
    for (const auto& r : inequalities) {
        if (r.name == name) return &r;
    }
    return nullptr;
}

std::string EmbeddingReport::to_json() const {
    json list = json::array();
    for (const auto& r : inequalities) {
        list.push_back({{"name", r.name},
                        {"worst_ratio", r.worst_ratio},
                        {"argmax_sample_id", r.argmax_sample_id},
                        {"samples", r.samples}});
    }
    return json{{"seed", seed}, {"lambda", lambda}, {"lambda_above_floor", lambda_above_floor},
                {"inequalities", list}}
        .dump();
}

namespace {

double lp_integral(const GridFunction& u, double p) {
    const auto w = quadrature_weights(u.grid());
    double s = 0.0;
    for (std::size_t j = 0; j < u.nodes(); ++j) {
        double m = 0.0;
        for (double v : u.node(j)) m += v * v;
        s += w[j] * std::pow(std::sqrt(m), p);
    }
    return s;
}

double length(const GridFunction& u) { return u.interval().b() - u.interval().a(); }

class Tally {
public:
    Tally(std::uint64_t seed, bool line) : seed_(seed), line_(line) {}

    void record(const std::string& name, std::uint64_t id, SideValues s, const GridFunction& u) {
        auto it = std::find_if(results_.begin(), results_.end(), [&](const auto& r) { return r.name == name; });
        if (it == results_.end()) {
            results_.push_back({name, 0.0, 0, 0});
            it = std::prev(results_.end());
        }
        double ratio = 0.0;
        if (s.rhs > 0.0) ratio = s.lhs / s.rhs;
        else if (s.lhs > 0.0) ratio = std::numeric_limits<double>::infinity();
        ++it->samples;
        if (ratio > it->worst_ratio) {
            it->worst_ratio = ratio;
            it->argmax_sample_id = id;
        }
        if (ratio > 1.0 + 1e-8) {
            json w{{"inequality", name}, {"seed", seed_}, {"sample_id", id},
                   {"family", line_ ? line_family(id) : interval_family(id)},
                   {"lhs", s.lhs}, {"rhs", s.rhs},
                   {"values", std::vector<double>(u.values().begin(), u.values().end())}};
            throw HypothesisViolation(name, w.dump());
        }
    }

    std::vector<InequalityResult>& results() { return results_; }

private:
    std::uint64_t seed_;
    bool line_;
    std::vector<InequalityResult> results_;
};

} // namespace

SideValues interval_lp_bound(const GridFunction& u, double alpha, double p) {
    const auto d = grunwald_left_rl(u, alpha);
    const double k = std::pow(length(u), alpha) / std::tgamma(alpha + 1.0);
    return {std::pow(lp_integral(u, p), 1.0 / p), k * std::pow(lp_integral(d, p), 1.0 / p)};
}

SideValues interval_sup_bound(const GridFunction& u, double alpha, double p) {
    if (!(alpha > 1.0 / p)) throw DomainError("sup bound needs alpha > 1/p");
    const double q = p / (p - 1.0);
    const auto d = grunwald_left_rl(u, alpha);
    const double k = std::pow(length(u), alpha - 1.0 / p) /
                     (std::tgamma(alpha) * std::pow((alpha - 1.0) * q + 1.0, 1.0 / q));
    return {sup_norm(u), k * std::pow(lp_integral(d, p), 1.0 / p)};
}

EmbeddingReport verify_embeddings(std::size_t samples, const ProblemSpec& spec,
                                  const EmbeddingConstants& constants, std::uint64_t seed,
                                  const IntervalGrid& interval) {
    spec.validate();
    EmbeddingReport report;
    report.seed = seed;
    report.lambda = spec.lambda;
    report.lambda_above_floor = spec.lambda >= constants.lambda_floor;
    const double a = spec.alpha;

    Tally line(seed, true);
    for (std::uint64_t id = 0; id < samples; ++id) {
        const auto u = sample_line(spec.grid, spec.dim, seed, id);
        const double l2 = l2_inner(u, u);
        const double qf = quadratic_form_alpha(u, a);
        const double sup = sup_norm(u);
        line.record("sup_embedding", id, {sup, constants.c_infinity * std::sqrt(l2 + qf)}, u);
        for (double p : {3.0, 4.0, 6.0}) {
            line.record("lp_interpolation_p" + std::to_string(static_cast<int>(p)), id,
                        {lp_integral(u, p), std::pow(sup, p - 2.0) * l2}, u);
        }
        if (!report.lambda_above_floor) continue;
        const double x2 = qf + spec.lambda * potential_form(u, u, spec.potential);
        line.record("l2_control", id, {l2, x2 / constants.theta}, u);
        line.record("h_alpha_control", id, {l2 + qf, (1.0 + 1.0 / constants.theta) * x2}, u);
        for (const auto& [p, kp] : constants.kappa_p) {
            line.record("lp_control_p" + std::to_string(static_cast<int>(p)), id,
                        {lp_integral(u, p), std::pow(kp, p) * std::pow(x2, 0.5 * p)}, u);
        }
    }

    Tally box(seed, false);
    for (std::uint64_t id = 0; id < samples; ++id) {
        const auto u = sample_interval(interval, spec.dim, seed, id);
        for (double p : {2.0, 4.0}) {
            const std::string tag = "_p" + std::to_string(static_cast<int>(p));
            box.record("interval_lp" + tag, id, interval_lp_bound(u, a, p), u);
            box.record("interval_sup" + tag, id, interval_sup_bound(u, a, p), u);
        }
    }

    report.inequalities = std::move(line.results());
    for (auto& r : box.results()) report.inequalities.push_back(r);
    return report;
}

} // namespace fracmp
