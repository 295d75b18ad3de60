#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <variant>
#include <vector>

namespace fracmp {

/**
 * Uniform periodic grid on [-halfwidth, halfwidth), the discrete stand-in for the real line.
 *
 * Nodes are t_j = -halfwidth + j*h, j = 0..N-1, with h = 2*halfwidth/N; the node at
 * +halfwidth is identified with the first one. N must be a power of two >= 4.
 */
class RealLineGrid {
public:
    RealLineGrid(double halfwidth, std::size_t num_points);

    double halfwidth() const noexcept { return halfwidth_; }
    std::size_t size() const noexcept { return n_; }
    double spacing() const noexcept { return h_; }
    double period() const noexcept { return 2.0 * halfwidth_; }
    double node(std::size_t j) const noexcept { return -halfwidth_ + static_cast<double>(j) * h_; }

    /// Angular frequency of half-spectrum index k in [0, N/2].
    double frequency(std::size_t k) const noexcept;

    /// All N angular frequencies in FFT order (0, 1, ..., N/2-1, -N/2, ..., -1) * 2*pi/(N*h).
    /// The Nyquist entry (-N/2) is unpaired; every multiplier in this library annihilates it.
    std::vector<double> frequencies() const;

    bool operator==(const RealLineGrid&) const = default;

private:
    double halfwidth_;
    std::size_t n_;
    double h_;
};

/// Uniform grid on [a, b] including both endpoints. A Dirichlet tag marks functions
/// on this grid as required to vanish at the first and last node.
class IntervalGrid {
public:
    IntervalGrid(double a, double b, std::size_t num_points, bool dirichlet = false);

    double a() const noexcept { return a_; }
    double b() const noexcept { return b_; }
    std::size_t size() const noexcept { return n_; }
    double spacing() const noexcept { return h_; }
    bool dirichlet() const noexcept { return dirichlet_; }
    double node(std::size_t j) const noexcept { return a_ + static_cast<double>(j) * h_; }

    bool operator==(const IntervalGrid&) const = default;

private:
    double a_;
    double b_;
    std::size_t n_;
    double h_;
    bool dirichlet_;
};

using Grid = std::variant<RealLineGrid, IntervalGrid>;

std::size_t node_count(const Grid& grid);
double node_position(const Grid& grid, std::size_t j);

/// Samples of u : grid -> R^n stored node-major (values[j*n + c]).
class GridFunction {
public:
    GridFunction(Grid grid, std::size_t dim);
    GridFunction(Grid grid, std::size_t dim, std::vector<double> values);

    /// Scalar (n = 1) function sampled from f(t).
    static GridFunction sample(const Grid& grid, const std::function<double(double)>& f);

    const Grid& grid() const noexcept { return grid_; }
    std::size_t dim() const noexcept { return dim_; }
    std::size_t nodes() const noexcept { return values_.size() / dim_; }

    bool on_line() const noexcept { return std::holds_alternative<RealLineGrid>(grid_); }
    const RealLineGrid& line() const;
    const IntervalGrid& interval() const;

    double& operator()(std::size_t j, std::size_t c) noexcept { return values_[j * dim_ + c]; }
    double operator()(std::size_t j, std::size_t c) const noexcept { return values_[j * dim_ + c]; }
    std::span<double> node(std::size_t j) noexcept { return {values_.data() + j * dim_, dim_}; }
    std::span<const double> node(std::size_t j) const noexcept { return {values_.data() + j * dim_, dim_}; }

    std::span<double> values() noexcept { return values_; }
    std::span<const double> values() const noexcept { return values_; }

    /// Component c gathered into a contiguous array.
    std::vector<double> component(std::size_t c) const;
    void set_component(std::size_t c, std::span<const double> data);

    bool same_space(const GridFunction& other) const noexcept;

    /// Throws ConfigError on non-finite entries or (Dirichlet grids) nonzero endpoints.
    void validate() const;

    GridFunction& operator+=(const GridFunction& other);
    GridFunction& operator-=(const GridFunction& other);
    GridFunction& operator*=(double s) noexcept;
    /// this += s * other
    GridFunction& axpy(double s, const GridFunction& other);

    bool operator==(const GridFunction&) const = default;

private:
    Grid grid_;
    std::size_t dim_;
    std::vector<double> values_;
};

GridFunction operator+(GridFunction a, const GridFunction& b);
GridFunction operator-(GridFunction a, const GridFunction& b);
GridFunction operator*(double s, GridFunction a);

/// Throws GridMismatch unless both functions live on the same grid with the same dimension.
void require_same_space(const GridFunction& a, const GridFunction& b);

/// Largest pointwise Euclidean magnitude max_j |u(t_j)|.
double sup_norm(const GridFunction& u);

} // namespace fracmp
