#include "support.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include <unistd.h>

#include "lom/solver.hpp"

namespace lomtest {

using namespace lom;

Scenario random_tiny_scenario(std::uint64_t seed, const TinyParams& p) {
  std::mt19937_64 rng(seed);
  auto uni = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };

  Scenario sc;
  sc.R = pick(1, p.max_r);
  sc.never = uni(p.never_lo, p.never_hi);
  sc.maxlow = p.random_maxlow ? pick(0, 1) : 0;
  sc.looks_required = p.looks_required;

  for (const char* id : {"a", "b"}) {
    PenaltyCurve curve{{{0.0, 0.0}}};
    const int n = pick(1, 3);
    for (int i = 0; i < n; ++i) {
      const Breakpoint& last = curve.breakpoints.back();
      const double dp = pick(0, 4) == 0 ? 0.0 : uni(0.0, 0.5);
      curve.breakpoints.push_back({last.t + uni(2.0, 15.0), last.p + dp});
    }
    sc.curves[id] = curve;
  }

  const double look_budgets[] = {1.0, 1.5, 2.0, 3.0, 4.0};
  for (const char* id : {"s1", "s2"}) {
    Sensor sensor{id, SensorKind::Sar, {}};
    for (int r = 1; r <= sc.R; ++r) {
      if (pick(0, 5) == 0) {
        sensor.budget_rows[r] = {0.5 * sc.cell_area, 10.0};  // omitted: cost 2
      } else {
        sensor.budget_rows[r] = {1e9, look_budgets[pick(0, 4)]};
      }
    }
    sc.sensors[id] = sensor;
  }

  const int C = pick(p.min_cells, p.max_cells);
  for (int c = 1; c <= C; ++c) {
    GridCell cell;
    cell.id = c;
    cell.row = (c - 1) / 3;
    cell.col = (c - 1) % 3;
    cell.center = {25.0 + 50.0 * cell.col, -25.0 - 50.0 * cell.row};
    cell.priority_class = pick(0, 2) == 0 ? PriorityClass::High : PriorityClass::Low;
    cell.curve_id = pick(0, 1) == 0 ? "a" : "b";
    cell.rmin = p.random_rmin ? pick(1, sc.R) : 1;
    sc.cells.push_back(cell);
  }

  const int S = pick(p.min_swaths, p.max_swaths);
  double t = 0.0;
  for (int s = 1; s <= S; ++s) {
    if (s == 1 || pick(0, 4) != 0) t += uni(1.0, 10.0);
    ExplicitFootprint fp;
    for (int c = 1; c <= C; ++c) {
      if (uni(0.0, 1.0) < p.cover_prob) fp.cells.push_back(c);
    }
    sc.swaths.push_back({s, t, pick(0, 1) == 0 ? "s1" : "s2", fp});
  }
  require_valid(sc);
  return sc;
}

double reference_objective(const Scenario& sc, const PenaltyTable& pen, const LookPlan& plan) {
  const int C = sc.num_cells();
  std::vector<int> last(static_cast<std::size_t>(C) + 1, 0);
  std::vector<int> looks(static_cast<std::size_t>(C) + 1, 0);
  std::set<std::pair<int, int>> looked;
  for (const Look& l : plan.looks) {
    looked.insert({l.s, l.c});
    ++looks[static_cast<std::size_t>(l.c)];
  }
  double total = 0.0;
  for (int s = 1; s <= sc.num_swaths(); ++s) {
    for (int c = 1; c <= C; ++c) {
      if (looked.count({s, c})) last[static_cast<std::size_t>(c)] = s;
      total += pen(c, s, s - last[static_cast<std::size_t>(c)]);
    }
  }
  for (int c = 1; c <= C; ++c) {
    const int short_by = sc.looks_required - looks[static_cast<std::size_t>(c)];
    if (short_by > 0) total += sc.never * std::min(short_by, 1);
  }
  return total;
}

BruteResult brute_force_optimum(const Scenario& sc, const PenaltyTable& pen, const CoverageSets& cov) {
  const int S = sc.num_swaths();
  // Every budget-feasible set of (cell, r) with distinct cells, per swath.
  std::vector<std::vector<std::vector<Look>>> options(static_cast<std::size_t>(S) + 1);
  for (int s = 1; s <= S; ++s) {
    const auto& cells = cov.of(s);
    std::vector<Look> cur;
    auto rec = [&](auto&& self, std::size_t i, double spent) -> void {
      if (i == cells.size()) {
        options[static_cast<std::size_t>(s)].push_back(cur);
        return;
      }
      self(self, i + 1, spent);
      for (int r = 1; r <= sc.R; ++r) {
        const Sensor& sensor = sc.sensor_of(s);
        auto row = sensor.budget_rows.find(r);
        if (row == sensor.budget_rows.end()) continue;
        const double cost = 1.0 / std::min(row->second.area_budget / sc.cell_area, row->second.look_budget);
        if (cost > 1.0 || spent + cost > 1.0 + 1e-9) continue;
        cur.push_back({cells[i], s, r});
        self(self, i + 1, spent + cost);
        cur.pop_back();
      }
    };
    rec(rec, 0, 0.0);
  }

  BruteResult best;
  best.objective = INFINITY;
  LookPlan plan;
  auto dfs = [&](auto&& self, int s) -> void {
    if (s > S) {
      ++best.leaves;
      std::map<int, int> low;
      for (const Look& l : plan.looks) {
        if (l.r < sc.cell(l.c).rmin && ++low[l.c] > sc.maxlow) return;
      }
      const double obj = reference_objective(sc, pen, plan);
      if (obj < best.objective) {
        best.objective = obj;
        std::set<int> seen;
        for (const Look& l : plan.looks) seen.insert(l.c);
        best.uncovered = sc.num_cells() - static_cast<int>(seen.size());
      }
      return;
    }
    for (const auto& opt : options[static_cast<std::size_t>(s)]) {
      plan.looks.insert(plan.looks.end(), opt.begin(), opt.end());
      self(self, s + 1);
      plan.looks.resize(plan.looks.size() - opt.size());
    }
  };
  dfs(dfs, 1);
  return best;
}

bool reference_covers(const Point& p, const Point& a, const Point& b, double width) {
  const double len = std::hypot(b.x - a.x, b.y - a.y);
  const double ux = (b.x - a.x) / len;
  const double uy = (b.y - a.y) / len;
  const double along = (p.x - a.x) * ux + (p.y - a.y) * uy;
  const double across = std::abs(-(p.x - a.x) * uy + (p.y - a.y) * ux);
  const double half = width / 2.0;
  if (along >= 0.0 && along <= len) return across <= half;
  const double da = std::hypot(p.x - a.x, p.y - a.y);
  const double db = std::hypot(p.x - b.x, p.y - b.y);
  return std::min(da, db) <= half;
}

namespace {

std::vector<int> name_indices(const std::string& name) {
  std::vector<int> out;
  std::stringstream ss(name.substr(2));
  std::string part;
  while (std::getline(ss, part, '_')) out.push_back(std::stoi(part));
  return out;
}

double activity(const ParsedRow& row, const std::vector<double>& v) {
  double a = 0.0;
  for (const Term& t : row.terms) a += t.coef * v[static_cast<std::size_t>(t.col)];
  return a;
}

bool row_ok(const ParsedRow& row, double act) {
  switch (row.sense) {
    case Sense::Le: return act <= row.rhs + 1e-9;
    case Sense::Ge: return act >= row.rhs - 1e-9;
    case Sense::Eq: return std::abs(act - row.rhs) <= 1e-9;
  }
  return false;
}

}  // namespace

std::optional<double> enumerate_parsed_milp(const ParsedModel& pm, std::int64_t max_leaves) {
  std::vector<int> xs;
  std::map<std::pair<int, int>, std::vector<int>> x_at;  // (c, s) -> X columns
  std::map<int, int> z_of;
  std::map<std::tuple<int, int, int>, int> y_of;
  std::map<std::pair<int, int>, int> g_of;
  int S = 0;
  for (int j = 0; j < static_cast<int>(pm.columns.size()); ++j) {
    const std::string& n = pm.columns[static_cast<std::size_t>(j)].name;
    const auto idx = name_indices(n);
    switch (n[0]) {
      case 'X': xs.push_back(j); x_at[{idx[0], idx[1]}].push_back(j); break;
      case 'Y': y_of[{idx[0], idx[1], idx[2]}] = j; break;
      case 'G': g_of[{idx[0], idx[1]}] = j; S = std::max(S, idx[1]); break;
      case 'Z': z_of[idx[0]] = j; break;
      default: throw Error("unexpected column " + n);
    }
  }
  std::map<int, double> required;
  for (const ParsedRow& row : pm.rows) {
    if (row.name.rfind("eq5_", 0) == 0) required[std::stoi(row.name.substr(4))] = row.rhs;
  }

  // Rows over X only with nonnegative coefficients bound partial activity.
  std::vector<char> is_x(pm.columns.size(), 0);
  for (int j : xs) is_x[static_cast<std::size_t>(j)] = 1;
  std::vector<std::vector<std::pair<int, double>>> caps_of(pm.columns.size());
  std::vector<double> cap_rhs;
  for (const ParsedRow& row : pm.rows) {
    if (row.sense == Sense::Ge) continue;
    bool only_x = true;
    for (const Term& t : row.terms) only_x = only_x && is_x[static_cast<std::size_t>(t.col)] && t.coef >= 0.0;
    if (!only_x) continue;
    for (const Term& t : row.terms) caps_of[static_cast<std::size_t>(t.col)].emplace_back(static_cast<int>(cap_rhs.size()), t.coef);
    cap_rhs.push_back(row.rhs);
  }
  std::vector<double> cap_used(cap_rhs.size(), 0.0);

  std::vector<double> v(pm.columns.size(), 0.0);
  std::optional<double> best;
  std::int64_t leaves = 0;
  bool overflow = false;

  std::vector<double> xval(pm.columns.size(), 0.0);
  auto leaf = [&]() {
    v = xval;
    for (const auto& [c, zcol] : z_of) {
      int gap = 0;
      double looks = 0.0;
      for (int s = 1; s <= S; ++s) {
        bool looked = false;
        if (auto it = x_at.find({c, s}); it != x_at.end()) {
          for (int j : it->second) {
            looks += xval[static_cast<std::size_t>(j)];
            looked = looked || xval[static_cast<std::size_t>(j)] > 0.5;
          }
        }
        gap = looked ? 0 : gap + 1;
        v[static_cast<std::size_t>(g_of.at({c, s}))] = gap;
        v[static_cast<std::size_t>(y_of.at({c, s, gap}))] = 1.0;
      }
      v[static_cast<std::size_t>(zcol)] = std::clamp(required.at(c) - looks, 0.0, 1.0);
    }
    for (const ParsedRow& row : pm.rows) {
      if (!row_ok(row, activity(row, v))) throw Error("completion violates row " + row.name);
    }
    double obj = 0.0;
    for (std::size_t j = 0; j < v.size(); ++j) obj += pm.columns[j].obj * v[j];
    if (!best || obj < *best) best = obj;
  };

  auto dfs = [&](auto&& self, std::size_t i) -> void {
    if (overflow) return;
    if (i == xs.size()) {
      if (++leaves > max_leaves) {
        overflow = true;
        return;
      }
      leaf();
      return;
    }
    const int j = xs[i];
    self(self, i + 1);
    const ParsedColumn& col = pm.columns[static_cast<std::size_t>(j)];
    if (col.ub < 1.0) return;
    bool fits = true;
    for (const auto& [k, coef] : caps_of[static_cast<std::size_t>(j)]) {
      fits = fits && cap_used[static_cast<std::size_t>(k)] + coef <= cap_rhs[static_cast<std::size_t>(k)] + 1e-9;
    }
    if (!fits) return;
    for (const auto& [k, coef] : caps_of[static_cast<std::size_t>(j)]) cap_used[static_cast<std::size_t>(k)] += coef;
    xval[static_cast<std::size_t>(j)] = 1.0;
    self(self, i + 1);
    xval[static_cast<std::size_t>(j)] = 0.0;
    for (const auto& [k, coef] : caps_of[static_cast<std::size_t>(j)]) cap_used[static_cast<std::size_t>(k)] -= coef;
  };
  dfs(dfs, 0);
  if (overflow) return std::nullopt;
  return best;
}

double parsed_objective(const ParsedModel& pm, const ModelInstance& m, const Assignment& a) {
  double obj = 0.0;
  for (int j = 0; j < static_cast<int>(m.columns.size()); ++j) {
    auto it = pm.column_index.find(m.column_name(j));
    if (it == pm.column_index.end()) throw Error("parsed model lacks column " + m.column_name(j));
    obj += pm.columns[static_cast<std::size_t>(it->second)].obj * a[j];
  }
  return obj;
}

bool external_solver_available() {
  static const bool available = [] {
    const std::string cmd = "python3 " + shell_quote(LOM_SOLVER_SCRIPT) + " --check >/dev/null 2>&1";
    return std::system(cmd.c_str()) == 0;
  }();
  return available;
}

std::filesystem::path fresh_temp_dir(const std::string& tag) {
  const auto dir = std::filesystem::temp_directory_path() / ("lom-test-" + tag + "-" + std::to_string(::getpid()));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace lomtest
