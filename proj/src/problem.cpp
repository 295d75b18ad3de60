#include "fracmp/problem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "json.hpp"

#include "fracmp/errors.hpp"
#include "fracmp/spaces.hpp"

namespace fracmp {

using nlohmann::json;

double WeightProfile::operator()(double t) const {
    if (amplitude == 0.0) return mean;
    return mean + amplitude * std::cos(2.0 * std::numbers::pi * t / period);
}

NonlinearitySpec NonlinearitySpec::pure_power(double p, WeightProfile g) {
    NonlinearitySpec s;
    s.kind = Kind::pure_power;
    s.p = p;
    s.g = g;
    if (p > 2.0) {
        s.sigma = p / (p - 2.0);
        // (p r^{p-2})^sigma / ((p/2 - 1) r^p) is constant in r.
        s.c0 = 1.001 * std::pow(p, s.sigma) / (0.5 * p - 1.0) *
               std::pow(g.sup(), s.sigma - 1.0);
    } else {
        s.sigma = 2.0;
        s.c0 = 16.0;
    }
    return s;
}

NonlinearitySpec NonlinearitySpec::oscillatory(double p, double eps, WeightProfile g) {
    NonlinearitySpec s;
    s.kind = Kind::oscillatory;
    s.p = p;
    s.epsilon = eps;
    s.g = g;
    s.sigma = p > 2.0 ? (p - eps) / (p - 2.0) : 2.0;
    s.c0 = 1.0e4;
    return s;
}

std::string NonlinearitySpec::family() const {
    return kind == Kind::pure_power ? "pure-power" : "oscillatory";
}

RadialValue radial(double r, const NonlinearitySpec& spec) {
    if (r <= 0.0) return {0.0, 0.0};
    const double p = spec.p;
    const double rp1 = std::pow(r, p - 1.0);
    if (spec.kind == NonlinearitySpec::Kind::pure_power) return {rp1 * r, p * rp1};
    const double eps = spec.epsilon;
    const double phase = std::pow(r, eps) / eps;
    const double sn = std::sin(phase);
    const double sin2 = sn * sn;
    const double re = std::pow(r, p - eps - 1.0);
    const double w = rp1 * r + (p - 2.0) * re * r * sin2;
    // d/dr sin^2(r^eps/eps) = sin(2 phase) r^{eps-1}
    const double dw = p * rp1 + (p - 2.0) * ((p - eps) * re * sin2 + rp1 * std::sin(2.0 * phase));
    return {w, dw};
}

namespace {

double magnitude(std::span<const double> u) {
    double s = 0.0;
    for (double v : u) s += v * v;
    return std::sqrt(s);
}

} // namespace

double eval_w(double t, std::span<const double> u, const NonlinearitySpec& spec) {
    return spec.g(t) * radial(magnitude(u), spec).w;
}

void eval_grad_w(double t, std::span<const double> u, const NonlinearitySpec& spec,
                 std::span<double> out) {
    const double r = magnitude(u);
    if (r == 0.0) {
        std::fill(out.begin(), out.end(), 0.0);
        return;
    }
    const double f = spec.g(t) * radial(r, spec).dw / r;
    for (std::size_t i = 0; i < u.size(); ++i) out[i] = f * u[i];
}

std::vector<double> eval_grad_w(double t, std::span<const double> u, const NonlinearitySpec& spec) {
    std::vector<double> out(u.size());
    eval_grad_w(t, u, spec, out);
    return out;
}

double eval_h(double t, std::span<const double> u, const NonlinearitySpec& spec) {
    const auto grad = eval_grad_w(t, u, spec);
    double dot = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) dot += grad[i] * u[i];
    return 0.5 * dot - eval_w(t, u, spec);
}

PotentialSpec PotentialSpec::squared_distance(double varrho, double width, double height, double c) {
    if (!(varrho > 0.0 && width > 0.0 && height > 0.0 && c > 0.0)) {
        throw ConfigError("squared-distance potential needs positive varrho, width, height and c");
    }
    PotentialSpec s;
    s.kind = Kind::scalar;
    s.c = c;
    s.varrho = varrho;
    s.j_bounds = {-varrho, varrho};
    s.family = "squared-distance";
    s.width = width;
    s.height = height;
    s.profile = [varrho, width, height](double t) {
        const double d = std::max(0.0, std::abs(t) - varrho);
        const double x = std::min(1.0, d / width);
        return height * x * x;
    };
    return s;
}

double PotentialSpec::scale(std::size_t component) const {
    if (kind == Kind::scalar || diag_scales.empty()) return 1.0;
    return diag_scales.at(component);
}

double PotentialSpec::form(double t, std::span<const double> u, std::span<const double> v) const {
    const double lt = l(t);
    if (lt == 0.0) return 0.0;
    double s = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) s += scale(i) * u[i] * v[i];
    return lt * s;
}

Eigen::MatrixXd eval_potential(double t, const PotentialSpec& spec, std::size_t dim) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dim),
                                              static_cast<Eigen::Index>(dim));
    const double lt = spec.l(t);
    for (std::size_t i = 0; i < dim; ++i) {
        m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = spec.scale(i) * lt;
    }
    return m;
}

void ProblemSpec::validate() const {
    if (!(alpha > 0.5 && alpha < 1.0)) throw DomainError("alpha must lie in (1/2, 1)");
    if (!(lambda > 0.0)) throw DomainError("lambda must be positive");
    if (dim == 0) throw ConfigError("vector dimension must be >= 1");
    if (!potential.profile) throw ConfigError("potential profile is not set");
    if (potential.kind == PotentialSpec::Kind::diagonal) {
        if (potential.diag_scales.size() != dim) {
            throw ConfigError("diagonal potential needs one scale per component");
        }
        for (double s : potential.diag_scales) {
            if (s < 1.0) throw ConfigError("diagonal potential scales must be >= 1");
        }
    }
}

ProblemSpec ProblemSpec::with_lambda(double new_lambda) const {
    ProblemSpec s = *this;
    s.lambda = new_lambda;
    return s;
}

bool ValidationReport::passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

const Check* ValidationReport::find(const std::string& name) const {
    for (const auto& c : checks) {
        if (c.name == name) return &c;
    }
    return nullptr;
}

void ValidationReport::require() const {
    for (const auto& c : checks) {
        if (!c.passed) throw HypothesisViolation(c.name, c.witness.empty() ? c.detail : c.witness);
    }
}

namespace {

std::vector<double> log_grid(double lo, double hi, std::size_t n) {
    std::vector<double> r(n);
    const double a = std::log10(lo);
    const double b = std::log10(hi);
    for (std::size_t i = 0; i < n; ++i) {
        r[i] = std::pow(10.0, a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1));
    }
    return r;
}

// Times at which g is probed; covers one period of the weight.
std::vector<double> probe_times(const WeightProfile& g) {
    std::vector<double> t;
    const std::size_t n = g.amplitude == 0.0 ? 1 : 16;
    for (std::size_t i = 0; i < n; ++i) t.push_back(g.period * static_cast<double>(i) / static_cast<double>(n));
    return t;
}

std::string witness(double t, double r, double value) {
    return json{{"t", t}, {"abs_u", r}, {"value", value}}.dump();
}

} // namespace

ValidationReport validate_nonlinearity(const NonlinearitySpec& spec, std::size_t sample_budget,
                                       std::uint64_t seed) {
    ValidationReport report;
    const auto times = probe_times(spec.g);

    {
        // Gradient ratio |grad W|/|u| must shrink as |u| -> 0.
        Check c{"vanishing_gradient_ratio", true, 0.0, "consistent with |grad W| = o(|u|)", ""};
        const auto radii = log_grid(1e-6, 1e-1, 61);
        double prev = std::numeric_limits<double>::infinity();
        double first = 0.0;
        for (auto it = radii.rbegin(); it != radii.rend(); ++it) {
            double ratio = 0.0;
            for (double t : times) ratio = std::max(ratio, spec.g(t) * std::abs(radial(*it, spec).dw) / *it);
            if (it == radii.rbegin()) first = ratio;
            if (ratio > prev * (1.0 + 1e-12) && c.passed) {
                c.passed = false;
                c.witness = witness(times.front(), *it, ratio);
            }
            prev = ratio;
        }
        c.observed = prev;
        if (c.passed && !(prev < first)) {
            c.passed = false;
            c.witness = witness(times.front(), radii.front(), prev);
        }
        if (!c.passed) c.detail = "gradient ratio does not decrease toward |u| = 0";
        report.checks.push_back(c);
    }

    {
        Check c{"nonnegative_w_and_h", true, 0.0, "W >= 0 and H >= 0 on random samples", ""};
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> ut(-50.0, 50.0);
        std::uniform_real_distribution<double> ulog(-6.0, 3.0);
        std::normal_distribution<double> dir(0.0, 1.0);
        double worst = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < sample_budget; ++i) {
            const double t = ut(rng);
            double u[2] = {dir(rng), dir(rng)};
            const double r = std::pow(10.0, ulog(rng));
            const double nrm = std::hypot(u[0], u[1]);
            u[0] *= r / nrm;
            u[1] *= r / nrm;
            const double w = eval_w(t, u, spec);
            const double hv = eval_h(t, u, spec);
            const double slack = 1e-12 * (1.0 + std::abs(w));
            worst = std::min(worst, std::min(w, hv) / (1.0 + std::abs(w)));
            if ((w < 0.0 || hv < -slack) && c.passed) {
                c.passed = false;
                c.witness = json{{"t", t}, {"u", {u[0], u[1]}}, {"W", w}, {"H", hv}}.dump();
            }
        }
        c.observed = sample_budget == 0 ? 0.0 : worst;
        report.checks.push_back(c);
    }

    {
        Check c{"superquadratic_growth", true, 0.0, "consistent with W/|u|^2 -> +infinity", ""};
        const auto radii = log_grid(spec.radius, 1e3, 200);
        double last = 0.0;
        for (double t : times) {
            double prev = -std::numeric_limits<double>::infinity();
            for (double r : radii) {
                const double q = spec.g(t) * radial(r, spec).w / (r * r);
                if (!(q > prev) && c.passed) {
                    c.passed = false;
                    c.witness = witness(t, r, q);
                }
                prev = q;
            }
            last = prev;
        }
        c.observed = last;
        if (!c.passed) c.detail = "W/|u|^2 is not increasing on the growth window";
        report.checks.push_back(c);
    }

    {
        Check c{"growth_bound", true, 0.0, "", ""};
        const auto radii = log_grid(spec.radius, 1e3, 2000);
        double tight = 0.0;
        for (double t : times) {
            for (double r : radii) {
                const double u[1] = {r};
                const double lhs = std::pow(std::abs(eval_grad_w(t, u, spec)[0]) / r, spec.sigma);
                const double hv = eval_h(t, u, spec);
                const double ratio = hv > 0.0 ? lhs / hv : std::numeric_limits<double>::infinity();
                if (ratio > tight) {
                    tight = ratio;
                    if (!(ratio <= spec.c0)) c.witness = witness(t, r, ratio);
                }
            }
        }
        c.observed = tight;
        c.passed = tight <= spec.c0;
        c.detail = "tightest observed c0 = " + std::to_string(tight) +
                   ", configured c0 = " + std::to_string(spec.c0);
        if (c.passed) c.witness.clear();
        report.checks.push_back(c);
    }
    return report;
}

NonlinearitySpec tighten_growth_constant(const NonlinearitySpec& spec) {
    const auto report = validate_nonlinearity(spec, 0);
    const double tight = report.find("growth_bound")->observed;
    if (!std::isfinite(tight) || !(tight > 0.0)) throw DomainError("growth bound has no finite tight constant");
    auto out = spec;
    out.c0 = 1.001 * tight;
    return out;
}

double growth_constant(const NonlinearitySpec& spec, double eps) {
    const double q = spec.growth_exponent();
    double best = 0.0;
    for (double r : log_grid(1e-6, 1e3, 2000)) {
        const double grad = spec.g.sup() * std::abs(radial(r, spec).dw);
        best = std::max(best, (grad - eps * r) / std::pow(r, q - 1.0));
    }
    return best;
}

ValidationReport validate_growth_bounds(const NonlinearitySpec& spec, std::span<const double> eps_values) {
    ValidationReport report;
    const double q = spec.growth_exponent();
    for (double eps : eps_values) {
        const double ce = growth_constant(spec, eps);
        const std::string tag = json(eps).dump();
        Check grad{"gradient_growth_eps_" + tag, true, ce, "", ""};
        Check pot{"potential_growth_eps_" + tag, true, ce, "", ""};
        for (double r : log_grid(1e-6, 1e3, 2000)) {
            const auto v = radial(r, spec);
            const double g = spec.g.sup();
            const double gb = eps * r + ce * std::pow(r, q - 1.0);
            const double wb = 0.5 * eps * r * r + ce / q * std::pow(r, q);
            if (g * std::abs(v.dw) > gb * (1.0 + 1e-9) && grad.passed) {
                grad.passed = false;
                grad.witness = witness(0.0, r, g * v.dw);
            }
            if (g * v.w > wb * (1.0 + 1e-9) && pot.passed) {
                pot.passed = false;
                pot.witness = witness(0.0, r, g * v.w);
            }
        }
        grad.detail = "C_eps = " + std::to_string(ce);
        pot.detail = grad.detail;
        report.checks.push_back(grad);
        report.checks.push_back(pot);
    }
    return report;
}

ValidationReport validate_potential(const PotentialSpec& spec, const RealLineGrid& grid,
                                    const EmbeddingConstants& constants) {
    ValidationReport report;
    constexpr std::size_t fine = 200001;
    const double lo = -grid.halfwidth();
    const double hi = grid.halfwidth();
    const double dt = (hi - lo) / static_cast<double>(fine - 1);

    Check nonneg{"nonnegative_profile", true, 0.0, "l(t) >= 0 on a fine grid", ""};
    double lmin = std::numeric_limits<double>::infinity();
    std::size_t zero_runs = 0;
    bool in_zero = false;
    bool zero_touches_edge = false;
    double zero_len = 0.0;
    for (std::size_t i = 0; i < fine; ++i) {
        const double t = lo + dt * static_cast<double>(i);
        const double v = spec.l(t);
        if (v < lmin) {
            lmin = v;
            if (v < 0.0 && nonneg.passed) {
                nonneg.passed = false;
                nonneg.witness = json{{"t", t}, {"l", v}}.dump();
            }
        }
        const bool z = v == 0.0;
        if (z) {
            zero_len += dt;
            if (i == 0 || i + 1 == fine) zero_touches_edge = true;
        }
        if (z && !in_zero) ++zero_runs;
        in_zero = z;
    }
    for (std::size_t j = 0; j < grid.size(); ++j) {
        const double v = spec.l(grid.node(j));
        lmin = std::min(lmin, v);
        if (v < 0.0 && nonneg.passed) {
            nonneg.passed = false;
            nonneg.witness = json{{"t", grid.node(j)}, {"l", v}}.dump();
        }
    }
    nonneg.observed = lmin;
    report.checks.push_back(nonneg);

    Check vanish{"vanishes_on_T", true, 0.0, "l == 0 exactly on [-varrho, varrho]", ""};
    for (std::size_t i = 0; i <= 2000; ++i) {
        const double t = -spec.varrho + 2.0 * spec.varrho * static_cast<double>(i) / 2000.0;
        const double v = spec.l(t);
        if (v != 0.0) {
            vanish.passed = false;
            vanish.observed = std::max(vanish.observed, std::abs(v));
            if (vanish.witness.empty()) vanish.witness = json{{"t", t}, {"l", v}}.dump();
        }
    }
    report.checks.push_back(vanish);

    Check interval{"zero_set_is_bounded_interval", true, zero_len,
                   "interior of l^{-1}(0) is one nonempty finite interval", ""};
    if (zero_runs != 1 || zero_touches_edge || !(zero_len > 0.0)) {
        interval.passed = false;
        interval.witness = json{{"zero_runs", zero_runs}, {"touches_edge", zero_touches_edge},
                                {"length", zero_len}}.dump();
    }
    report.checks.push_back(interval);

    const double gated = constants.gate_factor * constants.c_infinity;
    Check measure{"sublevel_measure", true, constants.meas_lc * gated * gated, "", ""};
    measure.passed = constants.meas_lc > 0.0 && constants.meas_lc * gated * gated < 1.0;
    measure.detail = "meas{l<c} = " + std::to_string(constants.meas_lc) + " vs 1/(" +
                     std::to_string(constants.gate_factor) + " C_inf)^2 = " +
                     std::to_string(1.0 / (gated * gated));
    if (!measure.passed) {
        measure.witness = json{{"meas_lc", constants.meas_lc}, {"c_infinity", constants.c_infinity},
                               {"gate_factor", constants.gate_factor}}.dump();
    }
    report.checks.push_back(measure);
    return report;
}

} // namespace fracmp
