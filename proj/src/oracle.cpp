#include "lom/oracle.hpp"

#include <algorithm>
#include <limits>
#include <optional>

#include "lom/evaluate.hpp"

namespace lom {

namespace {

constexpr double kBudgetTol = 1e-9;

struct Option {
  int r = 0;
  double cost = 0.0;
  bool low = false;
};

struct Choice {
  int c = 0;
  Option opt;
};

// All combinations picking at most one option per cell within budget, ordered
// by size then lexicographically by (cell, r).
std::vector<std::vector<Choice>> enumerate_choices(const std::vector<std::pair<int, std::vector<Option>>>& per_cell,
                                                   std::int64_t max_nodes) {
  std::vector<std::vector<Choice>> out;
  std::vector<Choice> cur;
  auto rec = [&](auto&& self, std::size_t i, double spent) -> void {
    if (i == per_cell.size()) {
      if (static_cast<std::int64_t>(out.size()) >= max_nodes) {
        throw Error("swath allocation enumeration exceeds " + std::to_string(max_nodes) +
                    " sets; export the MILP and use an external solver instead");
      }
      out.push_back(cur);
      return;
    }
    self(self, i + 1, spent);
    for (const Option& o : per_cell[i].second) {
      if (spent + o.cost > 1.0 + kBudgetTol) continue;
      cur.push_back({per_cell[i].first, o});
      self(self, i + 1, spent + o.cost);
      cur.pop_back();
    }
  };
  rec(rec, 0, 0.0);
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(), [](const Choice& x, const Choice& y) {
      return std::tie(x.c, x.opt.r) < std::tie(y.c, y.opt.r);
    });
  });
  return out;
}

}  // namespace

std::vector<Allocation> enumerate_swath_allocations(const std::vector<int>& cells,
                                                    const std::vector<std::pair<int, double>>& resolutions,
                                                    std::int64_t max_nodes) {
  std::vector<Option> opts;
  for (const auto& [r, cost] : resolutions) {
    if (!(cost > 0.0)) throw Error("resolution " + std::to_string(r) + " has non-positive cost");
    opts.push_back({r, cost, false});
  }
  std::vector<int> sorted = cells;
  std::sort(sorted.begin(), sorted.end());
  std::vector<std::pair<int, std::vector<Option>>> per_cell;
  for (int c : sorted) per_cell.emplace_back(c, opts);

  std::vector<Allocation> out;
  for (const auto& combo : enumerate_choices(per_cell, max_nodes)) {
    Allocation a;
    for (const Choice& ch : combo) a.push_back({ch.c, ch.opt.r});
    out.push_back(std::move(a));
  }
  return out;
}

ExactResult solve_exact(const Scenario& sc, const PenaltyTable& pen, const CoverageSets& cov,
                        const SearchLimits& limits) {
  if (limits.max_cells <= 0 || limits.max_swaths <= 0 || limits.max_resolutions <= 0 || limits.max_nodes <= 0) {
    throw Error("search limits must be positive");
  }
  const int C = sc.num_cells();
  const int S = sc.num_swaths();
  if (C > limits.max_cells || S > limits.max_swaths || sc.R > limits.max_resolutions) {
    throw Error("instance (C=" + std::to_string(C) + ", S=" + std::to_string(S) + ", R=" + std::to_string(sc.R) +
                ") exceeds oracle limits (" + std::to_string(limits.max_cells) + ", " +
                std::to_string(limits.max_swaths) + ", " + std::to_string(limits.max_resolutions) +
                "); export the MILP and use an external solver instead");
  }

  // Per swath: the candidate allocations after both reductions.
  std::vector<std::vector<std::vector<Choice>>> allocations(static_cast<std::size_t>(S) + 1);
  // can_look[s][c]: swath s has some admissible look for cell c.
  std::vector<std::vector<int>> can_look(static_cast<std::size_t>(S) + 2, std::vector<int>(static_cast<std::size_t>(C) + 1, 0));
  for (int s = 1; s <= S; ++s) {
    std::vector<std::pair<int, std::vector<Option>>> per_cell;
    std::vector<std::optional<double>> high_cost(static_cast<std::size_t>(C) + 1);
    for (int c : cov.of(s)) {
      std::optional<Option> high;
      std::optional<Option> low;
      for (int r = 1; r <= sc.R; ++r) {
        const auto cost = swath_cost(sc, s, r);
        if (!cost) continue;
        const bool is_low = r < sc.cell(c).rmin;
        auto& slot = is_low ? low : high;
        if (!slot || *cost < slot->cost) slot = Option{r, *cost, is_low};
      }
      std::vector<Option> opts;
      if (high) {
        opts.push_back(*high);
        high_cost[static_cast<std::size_t>(c)] = high->cost;
      }
      if (low && sc.maxlow > 0) opts.push_back(*low);
      std::sort(opts.begin(), opts.end(), [](const Option& a, const Option& b) { return a.r < b.r; });
      if (!opts.empty()) {
        per_cell.emplace_back(c, std::move(opts));
        can_look[static_cast<std::size_t>(s)][static_cast<std::size_t>(c)] = 1;
      }
    }
    for (auto& combo : enumerate_choices(per_cell, limits.max_nodes)) {
      double spent = 0.0;
      std::vector<char> used(static_cast<std::size_t>(C) + 1, 0);
      for (const Choice& ch : combo) {
        spent += ch.opt.cost;
        used[static_cast<std::size_t>(ch.c)] = 1;
      }
      bool maximal = true;
      for (const auto& [c, opts] : per_cell) {
        const auto& h = high_cost[static_cast<std::size_t>(c)];
        if (!used[static_cast<std::size_t>(c)] && h && spent + *h <= 1.0 + kBudgetTol) {
          maximal = false;
          break;
        }
      }
      if (maximal) allocations[static_cast<std::size_t>(s)].push_back(std::move(combo));
    }
  }
  // remaining[s][c]: swaths after s that can still look at c.
  std::vector<std::vector<int>> remaining(static_cast<std::size_t>(S) + 1, std::vector<int>(static_cast<std::size_t>(C) + 1, 0));
  for (int s = S - 1; s >= 0; --s) {
    for (int c = 1; c <= C; ++c) {
      remaining[static_cast<std::size_t>(s)][static_cast<std::size_t>(c)] =
          remaining[static_cast<std::size_t>(s) + 1][static_cast<std::size_t>(c)] +
          can_look[static_cast<std::size_t>(s) + 1][static_cast<std::size_t>(c)];
    }
  }

  std::vector<int> last(static_cast<std::size_t>(C) + 1, 0);
  std::vector<int> looks(static_cast<std::size_t>(C) + 1, 0);
  std::vector<int> low(static_cast<std::size_t>(C) + 1, 0);
  std::vector<Look> path;

  double best = std::numeric_limits<double>::infinity();
  std::vector<Look> best_path;
  bool found = false;
  std::int64_t nodes = 0;

  auto never_bound = [&](int s) {
    double shortfall = 0.0;
    for (int c = 1; c <= C; ++c) {
      const int possible = looks[static_cast<std::size_t>(c)] + remaining[static_cast<std::size_t>(s)][static_cast<std::size_t>(c)];
      shortfall += std::clamp(sc.looks_required - possible, 0, 1);
    }
    return sc.never * shortfall;
  };

  auto dfs = [&](auto&& self, int s, double penalty) -> void {
    if (++nodes > limits.max_nodes) {
      throw Error("oracle search exceeded " + std::to_string(limits.max_nodes) +
                  " nodes; export the MILP and use an external solver instead");
    }
    if (s > S) {
      const double total = penalty + never_bound(S);
      if (!found || total < best) {
        best = total;
        best_path = path;
        found = true;
      }
      return;
    }
    for (const auto& combo : allocations[static_cast<std::size_t>(s)]) {
      bool ok = true;
      for (const Choice& ch : combo) {
        if (ch.opt.low && low[static_cast<std::size_t>(ch.c)] + 1 > sc.maxlow) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;

      const std::vector<int> saved_last = last;
      for (const Choice& ch : combo) {
        last[static_cast<std::size_t>(ch.c)] = s;
        ++looks[static_cast<std::size_t>(ch.c)];
        if (ch.opt.low) ++low[static_cast<std::size_t>(ch.c)];
        path.push_back({ch.c, s, ch.opt.r});
      }
      double step = penalty;
      for (int c = 1; c <= C; ++c) step += pen(c, s, s - last[static_cast<std::size_t>(c)]);
      if (!found || step + never_bound(s) < best) self(self, s + 1, step);
      for (const Choice& ch : combo) {
        --looks[static_cast<std::size_t>(ch.c)];
        if (ch.opt.low) --low[static_cast<std::size_t>(ch.c)];
        path.pop_back();
      }
      last = saved_last;
    }
  };
  dfs(dfs, 1, 0.0);

  ExactResult out;
  out.plan.looks = best_path;
  out.plan.normalize();
  out.objective = objective_value(sc, pen, out.plan);
  out.nodes = nodes;
  return out;
}

}  // namespace lom
