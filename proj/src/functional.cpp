#include "fracmp/functional.hpp"

#include <cmath>
#include <string>

#include "fracmp/errors.hpp"
#include "fracmp/fracops.hpp"
#include "fracmp/spaces.hpp"

namespace fracmp {

namespace {

void require_line(const GridFunction& u, const ProblemSpec& spec) {
    if (!u.on_line() || !(u.line() == spec.grid) || u.dim() != spec.dim) {
        throw GridMismatch("function does not live on the problem grid");
    }
}

double dot(const GridFunction& a, const GridFunction& b) {
    double s = 0.0;
    const auto x = a.values();
    const auto y = b.values();
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
}

/// lambda L(t_j) u_j at every node.
GridFunction apply_potential(const GridFunction& u, const ProblemSpec& spec) {
    GridFunction out(u.grid(), u.dim());
    for (std::size_t j = 0; j < u.nodes(); ++j) {
        const double lt = spec.lambda * spec.potential.l(node_position(u.grid(), j));
        if (lt == 0.0) continue;
        for (std::size_t c = 0; c < u.dim(); ++c) out(j, c) = lt * spec.potential.scale(c) * u(j, c);
    }
    return out;
}

} // namespace

double potential_energy(const GridFunction& u, const NonlinearitySpec& w) {
    const auto q = quadrature_weights(u.grid());
    double s = 0.0;
    for (std::size_t j = 0; j < u.nodes(); ++j) s += q[j] * eval_w(node_position(u.grid(), j), u.node(j), w);
    return s;
}

GridFunction nonlinear_gradient(const GridFunction& u, const NonlinearitySpec& w) {
    GridFunction out(u.grid(), u.dim());
    for (std::size_t j = 0; j < u.nodes(); ++j) eval_grad_w(node_position(u.grid(), j), u.node(j), w, out.node(j));
    return out;
}

double energy(const GridFunction& u, const ProblemSpec& spec) {
    require_line(u, spec);
    return 0.5 * inner_x_lambda(u, u, spec) - potential_energy(u, spec.nonlinearity);
}

double derivative_action(const GridFunction& u, const GridFunction& v, const ProblemSpec& spec) {
    require_line(u, spec);
    require_same_space(u, v);
    const auto g = nonlinear_gradient(u, spec.nonlinearity);
    return inner_x_lambda(u, v, spec) - l2_inner(g, v);
}

GridFunction apply_x_operator(const GridFunction& u, const ProblemSpec& spec) {
    auto out = apply_energy_operator(u, spec.alpha);
    out += apply_potential(u, spec);
    return out;
}

double metric_inner(const GridFunction& g, const GridFunction& v, const ProblemSpec& spec, Metric metric) {
    require_same_space(g, v);
    if (metric == Metric::h_alpha) return l2_inner(g, v) + bilinear_form_alpha(g, v, spec.alpha);
    return inner_x_lambda(g, v, spec);
}

double metric_norm(const GridFunction& g, const ProblemSpec& spec, Metric metric) {
    return std::sqrt(std::max(0.0, metric_inner(g, g, spec, metric)));
}

GridFunction gradient_rep(const GridFunction& u, const ProblemSpec& spec, Metric metric, const CgOptions& cg) {
    require_line(u, spec);
    const auto gw = nonlinear_gradient(u, spec.nonlinearity);
    if (metric == Metric::h_alpha) {
        // (1 + K) g = (K + lambda L) u - grad W, rearranged to avoid applying K to u.
        auto rhs = u;
        rhs -= apply_potential(u, spec);
        rhs += gw;
        return u - solve_shifted_energy_operator(rhs, spec.alpha, 1.0);
    }
    // (K + lambda L) g = (K + lambda L) u - grad W, so g = u - (K + lambda L)^{-1} grad W.
    const double bnorm = std::sqrt(dot(gw, gw));
    if (bnorm == 0.0) return u;
    GridFunction x(u.grid(), u.dim());
    auto r = gw;
    // Preconditioner S^{-1} (1 + K)^{-1} S^{-1} with S^2 = 1 + lambda L, which matches
    // K + lambda L both where L vanishes and where the potential dominates.
    std::vector<double> scale(u.nodes());
    for (std::size_t j = 0; j < u.nodes(); ++j) {
        scale[j] = 1.0 / std::sqrt(1.0 + spec.lambda * spec.potential.l(node_position(u.grid(), j)));
    }
    const auto precondition = [&](const GridFunction& res) {
        GridFunction y = res;
        for (std::size_t j = 0; j < y.nodes(); ++j) {
            for (std::size_t c = 0; c < y.dim(); ++c) y(j, c) *= scale[j];
        }
        y = solve_shifted_energy_operator(y, spec.alpha, 1.0);
        for (std::size_t j = 0; j < y.nodes(); ++j) {
            for (std::size_t c = 0; c < y.dim(); ++c) y(j, c) *= scale[j];
        }
        return y;
    };
    auto z = precondition(r);
    auto p = z;
    double rz = dot(r, z);
    double rnorm = bnorm;
    for (std::size_t it = 0; it < cg.max_iterations; ++it) {
        const auto ap = apply_x_operator(p, spec);
        const double step = rz / dot(p, ap);
        x.axpy(step, p);
        r.axpy(-step, ap);
        rnorm = std::sqrt(dot(r, r));
        if (rnorm <= cg.tolerance * bnorm) return u - x;
        z = precondition(r);
        const double rz_next = dot(r, z);
        p *= rz_next / rz;
        p += z;
        rz = rz_next;
    }
    throw SolverError("conjugate gradient did not converge for the X-metric gradient", rnorm / bnorm);
}

IdentityCheck h_identity(const GridFunction& u, const ProblemSpec& spec) {
    const double lhs = energy(u, spec) - 0.5 * derivative_action(u, u, spec);
    const auto q = quadrature_weights(u.grid());
    double rhs = 0.0;
    for (std::size_t j = 0; j < u.nodes(); ++j) rhs += q[j] * eval_h(node_position(u.grid(), j), u.node(j), spec.nonlinearity);
    return {lhs, rhs, std::abs(lhs - rhs)};
}

IntervalProblem::IntervalProblem(const ProblemSpec& spec, std::size_t num_points)
    : IntervalProblem(spec, IntervalGrid(-spec.potential.varrho, spec.potential.varrho, num_points, true)) {}

IntervalProblem::IntervalProblem(const ProblemSpec& spec, const IntervalGrid& grid)
    : spec_(spec), grid_(grid.a(), grid.b(), grid.size(), true) {
    require_order(spec.alpha);
    a_ = interval_stiffness(grid_, spec.alpha);
    Eigen::MatrixXd m = a_;
    m.diagonal().array() += grid_.spacing();
    metric_.compute(m);
    if (metric_.info() != Eigen::Success) throw SolverError("interval metric is not positive definite", 0.0);
}

void IntervalProblem::require_dirichlet(const GridFunction& u) const {
    if (u.on_line()) throw GridMismatch("BVP functions live on an interval grid");
    const auto& g = u.interval();
    if (g.a() != grid_.a() || g.b() != grid_.b() || g.size() != grid_.size() || u.dim() != spec_.dim) {
        throw GridMismatch("function does not live on the BVP grid");
    }
    for (std::size_t c = 0; c < u.dim(); ++c) {
        if (u(0, c) != 0.0 || u(u.nodes() - 1, c) != 0.0) {
            throw DomainError("BVP functions must vanish at both endpoints");
        }
    }
}

Eigen::VectorXd IntervalProblem::interior(const GridFunction& u, std::size_t c) const {
    const auto m = static_cast<Eigen::Index>(grid_.size() - 2);
    Eigen::VectorXd x(m);
    for (Eigen::Index i = 0; i < m; ++i) x(i) = u(static_cast<std::size_t>(i) + 1, c);
    return x;
}

double IntervalProblem::quadratic_part(const GridFunction& u) const {
    require_dirichlet(u);
    double s = 0.0;
    for (std::size_t c = 0; c < u.dim(); ++c) {
        const auto x = interior(u, c);
        s += x.dot(a_ * x);
    }
    return 0.5 * s;
}

double IntervalProblem::energy(const GridFunction& u) const {
    return quadratic_part(u) - potential_energy(u, spec_.nonlinearity);
}

double IntervalProblem::derivative_action(const GridFunction& u, const GridFunction& v) const {
    require_dirichlet(u);
    require_dirichlet(v);
    double s = 0.0;
    for (std::size_t c = 0; c < u.dim(); ++c) s += interior(v, c).dot(a_ * interior(u, c));
    return s - l2_inner(nonlinear_gradient(u, spec_.nonlinearity), v);
}

GridFunction IntervalProblem::gradient(const GridFunction& u) const {
    require_dirichlet(u);
    const double h = grid_.spacing();
    const auto gw = nonlinear_gradient(u, spec_.nonlinearity);
    // (A + h I) g = A u - h grad W  =>  g = u - (A + h I)^{-1} (h u + h grad W)
    GridFunction g = u;
    for (std::size_t c = 0; c < u.dim(); ++c) {
        Eigen::VectorXd rhs = h * (interior(u, c) + interior(gw, c));
        const Eigen::VectorXd corr = metric_.solve(rhs);
        for (Eigen::Index i = 0; i < corr.size(); ++i) g(static_cast<std::size_t>(i) + 1, c) -= corr(i);
    }
    return g;
}

double IntervalProblem::metric_norm(const GridFunction& g) const {
    require_dirichlet(g);
    double s = 0.0;
    for (std::size_t c = 0; c < g.dim(); ++c) {
        const auto x = interior(g, c);
        s += x.dot(a_ * x) + grid_.spacing() * x.squaredNorm();
    }
    return std::sqrt(std::max(0.0, s));
}

double IntervalProblem::euler_lagrange_residual(const GridFunction& u) const { return metric_norm(gradient(u)); }

double bvp_energy(const GridFunction& u, const ProblemSpec& spec) {
    if (u.on_line()) throw GridMismatch("BVP functions live on an interval grid");
    return IntervalProblem(spec, u.interval()).energy(u);
}

double bvp_derivative_action(const GridFunction& u, const GridFunction& v, const ProblemSpec& spec) {
    if (u.on_line()) throw GridMismatch("BVP functions live on an interval grid");
    return IntervalProblem(spec, u.interval()).derivative_action(u, v);
}

} // namespace fracmp
