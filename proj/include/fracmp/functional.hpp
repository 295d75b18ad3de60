#pragma once

#include <cstddef>
#include <memory>

#include <Eigen/Dense>

#include "fracmp/grid.hpp"
#include "fracmp/problem.hpp"

namespace fracmp {

/*
 * Energy on the truncated line
 *
 *   I(u) = 1/2 ||u||_X^2 - \int W(t, u) dt,   ||u||_X^2 = Q_alpha(u) + lambda \int (L u, u)
 *
 * with every integral evaluated by the same node quadrature, so algebraic identities between
 * these quantities hold to round-off.
 */

double energy(const GridFunction& u, const ProblemSpec& spec);
/// \int W(t, u(t)) dt
double potential_energy(const GridFunction& u, const NonlinearitySpec& w);
/// I'(u) v
double derivative_action(const GridFunction& u, const GridFunction& v, const ProblemSpec& spec);
/// Nodal values of grad W(t_j, u_j).
GridFunction nonlinear_gradient(const GridFunction& u, const NonlinearitySpec& w);

enum class Metric {
    /// <g, v> = \int g v + Q_alpha(g, v); diagonal in frequency.
    h_alpha,
    /// <g, v> = inner_x_lambda(g, v); solved by preconditioned CG.
    x_alpha_lambda,
};

struct CgOptions {
    double tolerance = 1e-10;
    std::size_t max_iterations = 2000;
};

/// g with <g, v>_metric = I'(u) v for every grid v.
GridFunction gradient_rep(const GridFunction& u, const ProblemSpec& spec, Metric metric = Metric::h_alpha,
                          const CgOptions& cg = {});

double metric_inner(const GridFunction& g, const GridFunction& v, const ProblemSpec& spec, Metric metric);
double metric_norm(const GridFunction& g, const ProblemSpec& spec, Metric metric);

/// (K + lambda L) u, the operator of the X inner product: h <apply_x_operator(u), v> = inner_x_lambda(u, v).
GridFunction apply_x_operator(const GridFunction& u, const ProblemSpec& spec);

struct IdentityCheck {
    double lhs;
    double rhs;
    double gap;
};
/// lhs = I(u) - I'(u)u / 2, rhs = \int H(t, u).
IdentityCheck h_identity(const GridFunction& u, const ProblemSpec& spec);

/**
 * Energy of the boundary value problem on [-varrho, varrho] with homogeneous Dirichlet data:
 *
 *   I(u) = 1/2 u^T A u - \int W(t, u),   A = interval_stiffness
 *
 * The stiffness matrix and the Cholesky factor of the metric A + h I are built once.
 */
class IntervalProblem {
public:
    IntervalProblem(const ProblemSpec& spec, std::size_t num_points);
    IntervalProblem(const ProblemSpec& spec, const IntervalGrid& grid);

    const IntervalGrid& grid() const noexcept { return grid_; }
    const ProblemSpec& spec() const noexcept { return spec_; }
    const Eigen::MatrixXd& stiffness() const noexcept { return a_; }

    double energy(const GridFunction& u) const;
    double derivative_action(const GridFunction& u, const GridFunction& v) const;
    /// 1/2 u^T A u
    double quadratic_part(const GridFunction& u) const;
    /// Representative in the metric <g, v> = g^T (A + h I) v; zero at the endpoints.
    GridFunction gradient(const GridFunction& u) const;
    double metric_norm(const GridFunction& g) const;
    /// Metric norm of the gradient: zero exactly at discrete solutions of the BVP.
    double euler_lagrange_residual(const GridFunction& u) const;

    void require_dirichlet(const GridFunction& u) const;

private:
    Eigen::VectorXd interior(const GridFunction& u, std::size_t c) const;

    ProblemSpec spec_;
    IntervalGrid grid_;
    Eigen::MatrixXd a_;
    Eigen::LLT<Eigen::MatrixXd> metric_;
};

double bvp_energy(const GridFunction& u, const ProblemSpec& spec);
double bvp_derivative_action(const GridFunction& u, const GridFunction& v, const ProblemSpec& spec);

} // namespace fracmp
