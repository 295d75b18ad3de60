#include "fracmp/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "fracmp/errors.hpp"

namespace fracmp {

namespace {

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

} // namespace

RealLineGrid::RealLineGrid(double halfwidth, std::size_t num_points)
    : halfwidth_(halfwidth), n_(num_points), h_(0.0) {
    if (!(halfwidth > 0.0) || !std::isfinite(halfwidth)) {
        throw ConfigError("real-line grid halfwidth must be positive and finite");
    }
    if (num_points < 4 || !is_power_of_two(num_points)) {
        throw ConfigError("real-line grid needs a power-of-two node count >= 4, got " +
                          std::to_string(num_points));
    }
    h_ = 2.0 * halfwidth_ / static_cast<double>(n_);
}

double RealLineGrid::frequency(std::size_t k) const noexcept {
    return 2.0 * std::numbers::pi * static_cast<double>(k) / (static_cast<double>(n_) * h_);
}

std::vector<double> RealLineGrid::frequencies() const {
    std::vector<double> w(n_);
    const double base = 2.0 * std::numbers::pi / (static_cast<double>(n_) * h_);
    for (std::size_t k = 0; k < n_; ++k) {
        const auto signed_k = k < n_ / 2 ? static_cast<double>(k)
                                         : static_cast<double>(k) - static_cast<double>(n_);
        w[k] = base * signed_k;
    }
    return w;
}

IntervalGrid::IntervalGrid(double a, double b, std::size_t num_points, bool dirichlet)
    : a_(a), b_(b), n_(num_points), h_(0.0), dirichlet_(dirichlet) {
    if (!(a < b) || !std::isfinite(a) || !std::isfinite(b)) {
        throw ConfigError("interval grid needs finite a < b");
    }
    if (num_points < 2) {
        throw ConfigError("interval grid needs at least 2 nodes");
    }
    h_ = (b_ - a_) / static_cast<double>(n_ - 1);
}

std::size_t node_count(const Grid& grid) {
    return std::visit([](const auto& g) { return g.size(); }, grid);
}

double node_position(const Grid& grid, std::size_t j) {
    return std::visit([j](const auto& g) { return g.node(j); }, grid);
}

GridFunction::GridFunction(Grid grid, std::size_t dim)
    : grid_(std::move(grid)), dim_(dim), values_() {
    if (dim_ == 0) throw ConfigError("grid function dimension must be >= 1");
    values_.assign(node_count(grid_) * dim_, 0.0);
}

GridFunction::GridFunction(Grid grid, std::size_t dim, std::vector<double> values)
    : grid_(std::move(grid)), dim_(dim), values_(std::move(values)) {
    if (dim_ == 0) throw ConfigError("grid function dimension must be >= 1");
    if (values_.size() != node_count(grid_) * dim_) {
        throw ConfigError("grid function value count does not match grid size times dimension");
    }
}

GridFunction GridFunction::sample(const Grid& grid, const std::function<double(double)>& f) {
    GridFunction u(grid, 1);
    for (std::size_t j = 0; j < u.nodes(); ++j) u.values_[j] = f(node_position(grid, j));
    return u;
}

const RealLineGrid& GridFunction::line() const {
    if (const auto* g = std::get_if<RealLineGrid>(&grid_)) return *g;
    throw GridMismatch("operation requires a real-line grid");
}

const IntervalGrid& GridFunction::interval() const {
    if (const auto* g = std::get_if<IntervalGrid>(&grid_)) return *g;
    throw GridMismatch("operation requires an interval grid");
}

std::vector<double> GridFunction::component(std::size_t c) const {
    std::vector<double> out(nodes());
    for (std::size_t j = 0; j < out.size(); ++j) out[j] = values_[j * dim_ + c];
    return out;
}

void GridFunction::set_component(std::size_t c, std::span<const double> data) {
    for (std::size_t j = 0; j < nodes(); ++j) values_[j * dim_ + c] = data[j];
}

bool GridFunction::same_space(const GridFunction& other) const noexcept {
    return dim_ == other.dim_ && grid_ == other.grid_;
}

void GridFunction::validate() const {
    for (double v : values_) {
        if (!std::isfinite(v)) throw ConfigError("grid function has non-finite entries");
    }
    if (const auto* g = std::get_if<IntervalGrid>(&grid_); g && g->dirichlet()) {
        for (std::size_t c = 0; c < dim_; ++c) {
            if ((*this)(0, c) != 0.0 || (*this)(nodes() - 1, c) != 0.0) {
                throw ConfigError("Dirichlet grid function has nonzero boundary values");
            }
        }
    }
}

GridFunction& GridFunction::operator+=(const GridFunction& other) {
    return axpy(1.0, other);
}

GridFunction& GridFunction::operator-=(const GridFunction& other) {
    return axpy(-1.0, other);
}

GridFunction& GridFunction::operator*=(double s) noexcept {
    for (double& v : values_) v *= s;
    return *this;
}

GridFunction& GridFunction::axpy(double s, const GridFunction& other) {
    require_same_space(*this, other);
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += s * other.values_[i];
    return *this;
}

GridFunction operator+(GridFunction a, const GridFunction& b) { return a += b; }
GridFunction operator-(GridFunction a, const GridFunction& b) { return a -= b; }
GridFunction operator*(double s, GridFunction a) { return a *= s; }

void require_same_space(const GridFunction& a, const GridFunction& b) {
    if (!a.same_space(b)) throw GridMismatch("grid functions live on different grids or dimensions");
}

double sup_norm(const GridFunction& u) {
    double best = 0.0;
    for (std::size_t j = 0; j < u.nodes(); ++j) {
        double s = 0.0;
        for (double v : u.node(j)) s += v * v;
        best = std::max(best, s);
    }
    return std::sqrt(best);
}

} // namespace fracmp
