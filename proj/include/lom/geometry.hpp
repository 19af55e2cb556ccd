#pragma once

// Swath-to-cell coverage. A strip covers a cell when the cell's center lies
// within width/2 of the entry-exit segment (boundary inclusive).

#include <set>
#include <vector>

#include "lom/scenario.hpp"

namespace lom {

struct CoverageSets {
  // covered[s-1] = cell ids covered by swath s, ascending.
  std::vector<std::vector<int>> covered;

  const std::vector<int>& of(int s) const { return covered.at(static_cast<std::size_t>(s - 1)); }
  bool covers(int s, int c) const;
  bool operator==(const CoverageSets&) const = default;
};

double point_segment_distance(const Point& p, const Point& a, const Point& b);

bool swath_covers(const Swath& swath, const GridCell& cell);

CoverageSets coverage_sets(const Scenario& sc);

}  // namespace lom
