#include "lom/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

namespace lom {

bool CoverageSets::covers(int s, int c) const {
  const auto& cells = of(s);
  return std::binary_search(cells.begin(), cells.end(), c);
}

double point_segment_distance(const Point& p, const Point& a_in, const Point& b_in) {
  // Canonical endpoint order so the result is bitwise symmetric in (a, b).
  const bool swap = std::tie(b_in.x, b_in.y) < std::tie(a_in.x, a_in.y);
  const Point& a = swap ? b_in : a_in;
  const Point& b = swap ? a_in : b_in;
  const double dx = b.x - a.x;
  const double dy = b.y - a.y;
  const double len2 = dx * dx + dy * dy;
  const double rx = p.x - a.x;
  const double ry = p.y - a.y;
  const double t = std::clamp((rx * dx + ry * dy) / len2, 0.0, 1.0);
  return std::hypot(rx - t * dx, ry - t * dy);
}

bool swath_covers(const Swath& swath, const GridCell& cell) {
  if (const auto* ex = std::get_if<ExplicitFootprint>(&swath.footprint)) {
    return std::find(ex->cells.begin(), ex->cells.end(), cell.id) != ex->cells.end();
  }
  const auto& strip = std::get<StripFootprint>(swath.footprint);
  if (strip.entry == strip.exit) throw Error("degenerate strip: entry == exit");
  if (!(strip.width > 0.0)) throw Error("strip width must be > 0");
  return point_segment_distance(cell.center, strip.entry, strip.exit) <= strip.width / 2.0;
}

CoverageSets coverage_sets(const Scenario& sc) {
  CoverageSets cov;
  cov.covered.reserve(sc.swaths.size());
  for (const Swath& sw : sc.swaths) {
    std::vector<int> cells;
    if (const auto* ex = std::get_if<ExplicitFootprint>(&sw.footprint)) {
      cells = ex->cells;
      std::sort(cells.begin(), cells.end());
    } else {
      try {
        for (const GridCell& cell : sc.cells) {
          if (swath_covers(sw, cell)) cells.push_back(cell.id);
        }
      } catch (const Error& e) {
        throw Error("swath " + std::to_string(sw.index) + ": " + e.what());
      }
    }
    cov.covered.push_back(std::move(cells));
  }
  return cov;
}

}  // namespace lom
