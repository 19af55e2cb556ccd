#pragma once

// Exact solver for desk-scale instances: depth-first search over swaths in
// chronological order, choosing one budget-feasible allocation per swath and
// carrying each cell's last-look swath, look count and low-resolution count.
// Refuses instances beyond its limits instead of returning a partial answer.
//
// Two reductions keep the search small without losing optimality (both rely
// on penalties being nondecreasing in the gap):
//  - per (swath, cell) only the cheapest resolution at or above rmin and the
//    cheapest below rmin are tried, since the objective ignores r otherwise;
//  - an allocation that could still afford another at-or-above-rmin look is
//    skipped, because adding that look never raises the objective.
//
// A look for the same (cell, swath) at two resolutions is never produced. The
// MILP permits it, which only matters when looks_required > 1.

#include <cstdint>
#include <utility>
#include <vector>

#include "lom/geometry.hpp"
#include "lom/plan.hpp"
#include "lom/scenario.hpp"

namespace lom {

struct SearchLimits {
  int max_cells = 6;
  int max_swaths = 4;
  int max_resolutions = 2;
  std::int64_t max_nodes = 10'000'000;
};

struct CellLook {
  int c = 0;
  int r = 0;
  auto operator<=>(const CellLook&) const = default;
};

using Allocation = std::vector<CellLook>;  // ascending by cell

// Every set of (cell, resolution) pairs with distinct cells whose costs sum to
// at most 1, the empty set included. Ordered by size, then lexicographically.
// `resolutions` holds (r, cost) pairs. Throws when more than max_nodes sets
// would be produced.
std::vector<Allocation> enumerate_swath_allocations(const std::vector<int>& cells,
                                                    const std::vector<std::pair<int, double>>& resolutions,
                                                    std::int64_t max_nodes = SearchLimits{}.max_nodes);

struct ExactResult {
  LookPlan plan;
  double objective = 0.0;  // objective_value(plan)
  std::int64_t nodes = 0;
};

ExactResult solve_exact(const Scenario& sc, const PenaltyTable& pen, const CoverageSets& cov,
                        const SearchLimits& limits = {});

}  // namespace lom
