#pragma once

#include <cstdint>
#include <string>

#include "fracmp/grid.hpp"

namespace fracmp {

/*
 * Deterministic random test functions. Sample `id` under `seed` is always the same function,
 * independent of how many other samples were drawn, so any failing sample can be replayed
 * from (seed, id) alone. The family is chosen by id % 3.
 */

/// Line families: Gaussian mixtures, compact C^2 bumps, random band-limited fields.
GridFunction sample_line(const RealLineGrid& grid, std::size_t dim, std::uint64_t seed, std::uint64_t id);

/// Interval families: sine series, bumps, polynomial-times-Gaussian. Endpoints are exactly 0
/// and the returned grid carries the Dirichlet tag.
GridFunction sample_interval(const IntervalGrid& grid, std::size_t dim, std::uint64_t seed,
                             std::uint64_t id);

std::string line_family(std::uint64_t id);
std::string interval_family(std::uint64_t id);

} // namespace fracmp
