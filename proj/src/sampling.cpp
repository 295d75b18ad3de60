#include "fracmp/sampling.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace fracmp {

namespace {

std::mt19937_64 stream(std::uint64_t seed, std::uint64_t id) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(id), static_cast<std::uint32_t>(id >> 32), 0x9e3779b9u};
    return std::mt19937_64(seq);
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

double gauss(std::mt19937_64& rng) { return std::normal_distribution<double>(0.0, 1.0)(rng); }

int count(std::mt19937_64& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

double bump(double t, double centre, double width) {
    const double x = (t - centre) / width;
    if (std::abs(x) >= 1.0) return 0.0;
    const double s = 1.0 - x * x;
    return s * s * s;
}

} // namespace

std::string line_family(std::uint64_t id) {
    switch (id % 3) {
    case 0: return "gaussian-mixture";
    case 1: return "bumps";
    default: return "band-limited";
    }
}

std::string interval_family(std::uint64_t id) {
    switch (id % 3) {
    case 0: return "sine-series";
    case 1: return "bumps";
    default: return "poly-gaussian";
    }
}

GridFunction sample_line(const RealLineGrid& grid, std::size_t dim, std::uint64_t seed, std::uint64_t id) {
    auto rng = stream(seed, id);
    GridFunction u(grid, dim);
    const double r = grid.halfwidth();
    const std::size_t n = grid.size();
    for (std::size_t c = 0; c < dim; ++c) {
        std::vector<double> col(n, 0.0);
        switch (id % 3) {
        case 0: {
            const int m = count(rng, 1, 4);
            for (int i = 0; i < m; ++i) {
                const double centre = uniform(rng, -0.25 * r, 0.25 * r);
                const double width = std::pow(10.0, uniform(rng, -0.7, 0.5));
                const double amp = gauss(rng);
                for (std::size_t j = 0; j < n; ++j) {
                    const double x = (grid.node(j) - centre) / width;
                    col[j] += amp * std::exp(-x * x);
                }
            }
            break;
        }
        case 1: {
            const int m = count(rng, 1, 3);
            for (int i = 0; i < m; ++i) {
                const double centre = uniform(rng, -0.25 * r, 0.25 * r);
                const double width = uniform(rng, 0.3, 4.0);
                const double amp = gauss(rng);
                for (std::size_t j = 0; j < n; ++j) col[j] += amp * bump(grid.node(j), centre, width);
            }
            break;
        }
        default: {
            // Grid Fourier modes with |w| <= 8.
            const int kmax = std::max(1, static_cast<int>(8.0 * grid.period() / (2.0 * std::numbers::pi)));
            const int m = count(rng, 1, 8);
            for (int i = 0; i < m; ++i) {
                const int k = count(rng, 1, std::min(kmax, static_cast<int>(n / 2) - 1));
                const double a = gauss(rng);
                const double phase = uniform(rng, 0.0, 2.0 * std::numbers::pi);
                const double w = grid.frequency(static_cast<std::size_t>(k));
                for (std::size_t j = 0; j < n; ++j) col[j] += a * std::cos(w * grid.node(j) + phase);
            }
            break;
        }
        }
        u.set_component(c, col);
    }
    return u;
}

GridFunction sample_interval(const IntervalGrid& grid, std::size_t dim, std::uint64_t seed,
                             std::uint64_t id) {
    auto rng = stream(seed, id ^ 0x5a5a5a5a00000000ull);
    const IntervalGrid g(grid.a(), grid.b(), grid.size(), true);
    GridFunction u(g, dim);
    const double a = g.a();
    const double len = g.b() - g.a();
    const std::size_t n = g.size();
    for (std::size_t c = 0; c < dim; ++c) {
        std::vector<double> col(n, 0.0);
        switch (id % 3) {
        case 0: {
            const int m = count(rng, 1, 8);
            for (int k = 1; k <= m; ++k) {
                const double amp = gauss(rng) / k;
                for (std::size_t j = 0; j < n; ++j) {
                    col[j] += amp * std::sin(k * std::numbers::pi * (g.node(j) - a) / len);
                }
            }
            break;
        }
        case 1: {
            const int m = count(rng, 1, 3);
            for (int i = 0; i < m; ++i) {
                const double width = uniform(rng, 0.05, 0.5) * len;
                const double centre = uniform(rng, a + width, g.b() - width);
                const double amp = gauss(rng);
                for (std::size_t j = 0; j < n; ++j) col[j] += amp * bump(g.node(j), centre, width);
            }
            break;
        }
        default: {
            const double c0 = gauss(rng);
            const double c1 = gauss(rng);
            const double c2 = gauss(rng);
            const double mid = uniform(rng, a, g.b());
            const double s = uniform(rng, 0.1, 1.0) * len;
            for (std::size_t j = 0; j < n; ++j) {
                const double x = (g.node(j) - a) / len;
                const double z = (g.node(j) - mid) / s;
                col[j] = x * (1.0 - x) * (c0 + c1 * x + c2 * x * x) * std::exp(-z * z);
            }
            break;
        }
        }
        col.front() = 0.0;
        col.back() = 0.0;
        u.set_component(c, col);
    }
    return u;
}

} // namespace fracmp
