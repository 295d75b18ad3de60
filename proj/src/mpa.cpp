#include "fracmp/mpa.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/toms748_solve.hpp>

#include "fracmp/errors.hpp"
#include "fracmp/fracops.hpp"
#include "fracmp/sampling.hpp"

namespace fracmp {

LineLandscape::LineLandscape(ProblemSpec spec, Metric metric, CgOptions cg)
    : spec_(std::move(spec)), metric_(metric), cg_(cg) {
    spec_.validate();
    weights_ = quadrature_weights(spec_.grid);
    for (std::size_t j = 0; j < weights_.size(); ++j) weights_[j] *= spec_.nonlinearity.g(spec_.grid.node(j));
}

double LineLandscape::energy(const GridFunction& u) const { return fracmp::energy(u, spec_); }

double LineLandscape::quadratic(const GridFunction& u) const { return 0.5 * inner_x_lambda(u, u, spec_); }

GridFunction LineLandscape::gradient(const GridFunction& u) const { return gradient_rep(u, spec_, metric_, cg_); }

double LineLandscape::metric_norm(const GridFunction& g) const { return fracmp::metric_norm(g, spec_, metric_); }

std::string LineLandscape::metric_name() const {
    return metric_ == Metric::h_alpha ? "h-alpha" : "x-alpha-lambda";
}

IntervalLandscape::IntervalLandscape(std::shared_ptr<const IntervalProblem> problem) : problem_(std::move(problem)) {
    const Grid g = problem_->grid();
    weights_ = quadrature_weights(g);
    for (std::size_t j = 0; j < weights_.size(); ++j) {
        weights_[j] *= problem_->spec().nonlinearity.g(problem_->grid().node(j));
    }
}

namespace {

/// s -> q s^2 - sum_j c_j w(s r_j): the energy along the ray through v with q = ||v||^2/2.
struct RayProfile {
    double q = 0.0;
    std::vector<std::pair<double, double>> terms;
    const NonlinearitySpec* w = nullptr;

    double f(double s) const {
        double n = 0.0;
        for (const auto& [c, r] : terms) n += c * radial(s * r, *w).w;
        return q * s * s - n;
    }
    double df(double s) const {
        double n = 0.0;
        for (const auto& [c, r] : terms) n += c * radial(s * r, *w).dw * r;
        return 2.0 * q * s - n;
    }
};

RayProfile make_profile(double q, const GridFunction& v, const std::vector<double>& weights,
                        const NonlinearitySpec& w) {
    RayProfile p;
    p.q = q;
    p.w = &w;
    for (std::size_t j = 0; j < v.nodes(); ++j) {
        double m = 0.0;
        for (double x : v.node(j)) m += x * x;
        if (m > 0.0 && weights[j] != 0.0) p.terms.emplace_back(weights[j], std::sqrt(m));
    }
    return p;
}

RayMaximum refine(const RayProfile& p, double lo, double hi) {
    const double dlo = p.df(lo);
    const double dhi = p.df(hi);
    if (dlo > 0.0 && dhi < 0.0) {
        std::uintmax_t iters = 200;
        const auto [a, b] = boost::math::tools::toms748_solve(
            [&](double s) { return p.df(s); }, lo, hi, dlo, dhi,
            boost::math::tools::eps_tolerance<double>(52), iters);
        const double s = 0.5 * (a + b);
        return {s, p.f(s)};
    }
    const auto [s, neg] = boost::math::tools::brent_find_minima([&](double x) { return -p.f(x); }, lo, hi, 52);
    return {s, -neg};
}

RayMaximum global_peak(const RayProfile& p) {
    const double s0 = 1.0 / std::sqrt(2.0 * p.q);
    const double factor = std::pow(2.0, 0.25);
    std::vector<double> s{s0 * 1e-6};
    std::vector<double> f{p.f(s.front())};
    std::size_t best = 0;
    while (true) {
        if (f.back() < 0.0 && s.size() > best + 1) break;
        if (s.back() > s0 * 1e8) throw GeometryError("energy stays nonnegative along the ray");
        s.push_back(s.back() * factor);
        f.push_back(p.f(s.back()));
        if (f.back() > f[best]) best = s.size() - 1;
    }
    const double lo = best > 0 ? s[best - 1] : 0.5 * s.front();
    const auto peak = refine(p, lo, s[best + 1]);
    if (peak.level >= f[best]) return peak;
    return {s[best], f[best]};
}

RayMaximum local_peak(const RayProfile& p, double hint) {
    const double d = p.df(hint);
    if (d == 0.0) return {hint, p.f(hint)};
    double lo = hint;
    double hi = hint;
    const double grow = 1.25;
    for (int k = 0; k < 400; ++k) {
        if (d > 0.0) {
            lo = hi;
            hi *= grow;
            if (p.df(hi) < 0.0) return refine(p, lo, hi);
        } else {
            hi = lo;
            lo /= grow;
            if (p.df(lo) > 0.0) return refine(p, lo, hi);
        }
    }
    return global_peak(p);
}

} // namespace

RayMaximum maximize_on_ray(const Landscape& landscape, const GridFunction& v, double hint) {
    const double q = landscape.quadratic(v);
    if (!(q > 0.0)) throw GeometryError("ray direction has zero norm");
    const auto p = make_profile(q, v, landscape.nonlinear_weights(), landscape.nonlinearity());
    return hint > 0.0 ? local_peak(p, hint) : global_peak(p);
}

RhoEta estimate_rho_eta(double theta, double meas_lc, double epsilon_c, double c_eps, double p) {
    if (!(epsilon_c < theta)) throw GeometryError("epsilon must be smaller than theta");
    const double lead = 0.5 * (1.0 - epsilon_c / theta);
    const double coef = c_eps / (p * std::pow(theta, 0.5 * p) * std::pow(meas_lc, 0.5 * (p - 2.0)));
    const auto bracket = [&](double rho) { return lead - coef * std::pow(rho, p - 2.0); };
    // 200 points per decade over [1e-8, 1e4].
    constexpr int points = 200 * 12;
    for (int i = points; i >= 0; --i) {
        const double rho = std::pow(10.0, -8.0 + static_cast<double>(i) / 200.0);
        const double b = bracket(rho);
        if (b > 0.0) return {rho, rho * rho * b};
    }
    throw GeometryError("no admissible rho; bracket at 1e-8 is " + std::to_string(bracket(1e-8)));
}

RhoEta estimate_rho_eta(const ProblemSpec& spec, const EmbeddingConstants& constants, double epsilon_c,
                        double c_eps) {
    return estimate_rho_eta(constants.theta, constants.meas_lc, epsilon_c, c_eps,
                            spec.nonlinearity.growth_exponent());
}

GridFunction bump_direction(const Grid& grid, std::size_t dim, double tau) {
    GridFunction psi(grid, dim);
    for (std::size_t j = 0; j < psi.nodes(); ++j) {
        const double x = node_position(grid, j) / tau;
        if (std::abs(x) < 1.0) {
            const double s = 1.0 - x * x;
            psi(j, 0) = s * s * s;
        }
    }
    return psi;
}

MountainPassSetup construct_e(const ProblemSpec& spec, const EmbeddingConstants& constants, double tau,
                              std::optional<double> epsilon_c, std::optional<double> c_eps) {
    spec.validate();
    if (!(tau > 0.0 && tau < spec.potential.varrho)) throw ConfigError("tau must lie in (0, varrho)");
    const double eps = epsilon_c.value_or(0.5 * constants.theta);
    const double ce = c_eps.value_or(growth_constant(spec.nonlinearity, eps));
    const auto geo = estimate_rho_eta(spec, constants, eps, ce);
    auto psi = bump_direction(spec.grid, spec.dim, tau);
    double sigma = 1.0;
    for (int k = 0; k <= 60; ++k, sigma *= 2.0) {
        const auto e = sigma * psi;
        if (energy(e, spec) < 0.0 && norm_x_lambda(e, spec) > geo.rho) {
            return {psi, tau, sigma, e, geo.rho, geo.eta, eps, ce};
        }
    }
    throw ConfigError("no sigma <= 2^60 makes the energy negative; nonlinearity too weak on this grid");
}

double ctilde_bound(const MountainPassSetup& setup, const ProblemSpec& spec) {
    const double q = 0.5 * quadratic_form_alpha(setup.psi, spec.alpha);
    auto weights = quadrature_weights(setup.psi.grid());
    for (std::size_t j = 0; j < weights.size(); ++j) {
        weights[j] *= spec.nonlinearity.g(node_position(setup.psi.grid(), j));
    }
    return global_peak(make_profile(q, setup.psi, weights, spec.nonlinearity)).level;
}

void MpaConfig::validate() const {
    if (path_nodes < 3) throw ConfigError("a mountain-pass path needs at least 3 nodes");
    if (!(tol > 0.0)) throw ConfigError("tolerance must be positive");
    if (!(initial_step > 0.0 && step_floor > 0.0 && step_floor < initial_step)) {
        throw ConfigError("step sizes must satisfy 0 < step_floor < initial_step");
    }
    if (!(armijo > 0.0 && armijo < 1.0)) throw ConfigError("Armijo constant must lie in (0, 1)");
}

namespace {

double norm_of(const Landscape& landscape, const GridFunction& u) {
    return std::sqrt(std::max(0.0, 2.0 * landscape.quadratic(u)));
}

SolveResult descend(const Landscape& landscape, const GridFunction& start, const MpaConfig& config,
                    const std::optional<GridFunction>& warm) {
    SolveResult out;
    out.metric = landscape.metric_name();
    auto peak = maximize_on_ray(landscape, start);
    GridFunction w = peak.s * start;
    double level = peak.level;
    if (warm) {
        const auto alt = maximize_on_ray(landscape, *warm);
        if (alt.level < level) {
            w = alt.s * *warm;
            level = alt.level;
        }
    }
    auto g = landscape.gradient(w);
    double res = landscape.metric_norm(g);
    double step = config.initial_step;
    double used = 0.0;
    constexpr double eps = std::numeric_limits<double>::epsilon();
    std::size_t it = 0;
    for (;; ++it) {
        const double nrm = norm_of(landscape, w);
        const TraceEntry entry{it, level, res, used};
        out.trace.push_back(entry);
        if (config.observer) config.observer(entry);
        if ((1.0 + nrm) * res <= config.tol) {
            out.converged = true;
            break;
        }
        if (it >= config.max_iters) {
            out.diagnostics = "iteration budget exhausted";
            break;
        }
        double trial = std::min(config.initial_step, 2.0 * step);
        bool accepted = false;
        GridFunction next = w;
        GridFunction next_g = g;
        double next_level = level;
        double next_res = res;
        while (trial >= config.step_floor) {
            GridFunction z = w;
            z.axpy(-trial, g);
            const auto pk = maximize_on_ray(landscape, z, 1.0);
            const double decrease = config.armijo * trial * res * res;
            const double noise = 64.0 * eps * (1.0 + std::abs(level));
            if (decrease > noise) {
                accepted = pk.level <= level - decrease;
                if (accepted) {
                    next = pk.s * z;
                    next_g = landscape.gradient(next);
                    next_res = landscape.metric_norm(next_g);
                }
            } else if (pk.level <= level + noise) {
                // Below round-off the level cannot certify progress; require a smaller gradient.
                next = pk.s * z;
                next_g = landscape.gradient(next);
                next_res = landscape.metric_norm(next_g);
                accepted = next_res < res;
            }
            if (accepted) {
                next_level = pk.level;
                break;
            }
            trial *= 0.5;
        }
        if (!accepted) {
            out.diagnostics = "line search reached the step floor";
            break;
        }
        w = std::move(next);
        g = std::move(next_g);
        level = next_level;
        res = next_res;
        step = trial;
        used = trial;
    }
    out.norm = norm_of(landscape, w);
    out.level = landscape.energy(w);
    out.residual = res;
    out.cerami = (1.0 + out.norm) * res;
    out.iterations = it;
    out.u = std::move(w);
    if (out.converged && !(out.level > 0.0)) {
        throw InconsistencyError("critical point with nonpositive level " + std::to_string(out.level));
    }
    return out;
}

bool better(const SolveResult& a, const SolveResult& b) {
    if (a.converged != b.converged) return a.converged;
    return a.level < b.level;
}

} // namespace

PathState materialize_path(const Landscape& landscape, const GridFunction& w, const GridFunction& e,
                           std::size_t nodes) {
    if (nodes < 3) throw ConfigError("a mountain-pass path needs at least 3 nodes");
    PathState path;
    GridFunction zero = 0.0 * e;
    std::vector<GridFunction> list;
    if (nodes == 3) {
        list = {zero, w, e};
    } else {
        const auto unit = [&](const GridFunction& u) { return (1.0 / norm_of(landscape, u)) * u; };
        const auto wh = unit(w);
        const auto eh = unit(e);
        double radius = std::max(2.0 * norm_of(landscape, w), norm_of(landscape, e));
        std::vector<GridFunction> anchors;
        for (int k = 0; k < 60; ++k, radius *= 2.0) {
            anchors = {w, radius * wh};
            bool negative = landscape.energy(anchors.back()) < 0.0;
            for (double th : {0.25, 0.5, 0.75, 1.0}) {
                auto d = (1.0 - th) * wh + th * eh;
                anchors.push_back(radius * unit(d));
                negative = negative && landscape.energy(anchors.back()) < 0.0;
            }
            if (negative) break;
        }
        anchors.push_back(e);
        const std::size_t first = std::max<std::size_t>(2, nodes / 2);
        for (std::size_t k = 0; k < first; ++k) {
            list.push_back((static_cast<double>(k) / static_cast<double>(first - 1)) * w);
        }
        const std::size_t rest = nodes - first;
        const double segments = static_cast<double>(anchors.size() - 1);
        for (std::size_t i = 1; i <= rest; ++i) {
            if (i == rest) {
                list.push_back(e);
                break;
            }
            const double pos = segments * static_cast<double>(i) / static_cast<double>(rest);
            const auto k = static_cast<std::size_t>(pos);
            const double frac = pos - static_cast<double>(k);
            list.push_back((1.0 - frac) * anchors[k] + frac * anchors[k + 1]);
        }
        list.front() = zero;
    }
    std::vector<double> energies;
    for (const auto& u : list) energies.push_back(landscape.energy(u));

    // Insert midpoints where the energy gap between neighbours exceeds 10x the median gap.
    std::vector<double> gaps;
    for (std::size_t i = 0; i + 1 < energies.size(); ++i) gaps.push_back(std::abs(energies[i + 1] - energies[i]));
    auto sorted = gaps;
    std::nth_element(sorted.begin(), sorted.begin() + static_cast<long>(sorted.size() / 2), sorted.end());
    const double median = sorted[sorted.size() / 2];
    if (median > 0.0) {
        for (std::size_t i = gaps.size(); i-- > 0;) {
            if (gaps[i] > 10.0 * median) {
                auto mid = 0.5 * (list[i] + list[i + 1]);
                const double em = landscape.energy(mid);
                list.insert(list.begin() + static_cast<long>(i) + 1, std::move(mid));
                energies.insert(energies.begin() + static_cast<long>(i) + 1, em);
            }
        }
    }
    path.nodes = std::move(list);
    path.energies = std::move(energies);
    path.argmax = static_cast<std::size_t>(
        std::max_element(path.energies.begin(), path.energies.end()) - path.energies.begin());
    return path;
}

SolveResult mountain_pass(const Landscape& landscape, const GridFunction& e, const MpaConfig& config,
                          const std::optional<GridFunction>& warm) {
    config.validate();
    auto best = descend(landscape, e, config, warm);
    const double top = sup_norm(e);
    for (std::size_t r = 1; r <= config.restarts; ++r) {
        GridFunction noise = e.on_line() ? sample_line(e.line(), e.dim(), config.seed, r)
                                         : sample_interval(e.interval(), e.dim(), config.seed, r);
        const double ns = sup_norm(noise);
        if (ns == 0.0) continue;
        GridFunction start = e;
        start.axpy(0.05 * top / ns, noise);
        if (!e.on_line()) {
            // Keep the grid tag of e so the start lies in the same space.
            start = GridFunction(e.grid(), e.dim(), std::vector<double>(start.values().begin(), start.values().end()));
        }
        auto trial = descend(landscape, start, config, std::nullopt);
        if (better(trial, best)) best = std::move(trial);
    }
    best.path = materialize_path(landscape, *best.u, e, config.path_nodes);
    return best;
}

SolveResult mpa_solve(const ProblemSpec& spec, const MountainPassSetup& setup, const MpaConfig& config,
                      const std::optional<GridFunction>& warm) {
    const LineLandscape landscape(spec, config.metric, config.cg);
    return mountain_pass(landscape, setup.e, config, warm);
}

SolveResult bvp_solve(const ProblemSpec& spec, std::size_t num_points, const MpaConfig& config) {
    auto problem = std::make_shared<const IntervalProblem>(spec, num_points);
    const IntervalLandscape landscape(problem);
    const Grid grid = problem->grid();
    auto psi = bump_direction(grid, spec.dim, 0.9 * spec.potential.varrho);
    double sigma = 1.0;
    for (int k = 0; k <= 60; ++k, sigma *= 2.0) {
        if (problem->energy(sigma * psi) < 0.0) return mountain_pass(landscape, sigma * psi, config);
    }
    throw ConfigError("no sigma <= 2^60 makes the BVP energy negative");
}

} // namespace fracmp
