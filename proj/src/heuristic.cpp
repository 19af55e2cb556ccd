#include "lom/heuristic.hpp"

#include <algorithm>

namespace lom {

LookPlan greedy_plan(const Scenario& sc, const CoverageSets& cov, int resolution) {
  if (resolution < 1 || resolution > sc.R) {
    throw Error("heuristic resolution " + std::to_string(resolution) + " outside 1.." + std::to_string(sc.R));
  }
  std::vector<double> last_look(static_cast<std::size_t>(sc.num_cells()) + 1, 0.0);
  LookPlan plan;

  struct Candidate {
    double pending;
    int row;
    int col;
    int c;
  };
  for (int s = 1; s <= sc.num_swaths(); ++s) {
    const Swath& sw = sc.swath(s);
    const auto cost = swath_cost(sc, s, resolution);
    if (!cost) {
      throw Error("swath " + std::to_string(s) + " (sensor '" + sw.sensor_id + "') cannot take looks at resolution " +
                  std::to_string(resolution));
    }
    std::vector<Candidate> ranked;
    for (int c : cov.of(s)) {
      const GridCell& cell = sc.cell(c);
      ranked.push_back({eval_curve(sc.curve_of(c), sw.time - last_look[static_cast<std::size_t>(c)]), cell.row, cell.col, c});
    }
    std::sort(ranked.begin(), ranked.end(), [](const Candidate& a, const Candidate& b) {
      if (a.pending != b.pending) return a.pending > b.pending;
      return std::tie(a.row, a.col, a.c) < std::tie(b.row, b.col, b.c);
    });

    double spent = 0.0;
    for (const Candidate& cand : ranked) {
      if (spent + *cost > 1.0 + 1e-9) break;
      spent += *cost;
      plan.looks.push_back({cand.c, s, resolution});
      last_look[static_cast<std::size_t>(cand.c)] = sw.time;
    }
  }
  plan.normalize();
  return plan;
}

}  // namespace lom
