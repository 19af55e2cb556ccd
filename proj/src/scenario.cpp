#include "lom/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <utility>

namespace lom {

std::string to_string(PriorityClass pc) { return pc == PriorityClass::High ? "high" : "low"; }

PriorityClass parse_priority_class(const std::string& s) {
  if (s == "high") return PriorityClass::High;
  if (s == "low") return PriorityClass::Low;
  throw Error("unknown priority class: " + s);
}

std::string to_string(SensorKind k) {
  switch (k) {
    case SensorKind::ElectroOptical: return "electro_optical";
    case SensorKind::InfraredDay: return "infrared_day";
    case SensorKind::InfraredNight: return "infrared_night";
    case SensorKind::Sar: return "sar";
  }
  return "unknown";
}

SensorKind parse_sensor_kind(const std::string& s) {
  if (s == "electro_optical") return SensorKind::ElectroOptical;
  if (s == "infrared_day") return SensorKind::InfraredDay;
  if (s == "infrared_night") return SensorKind::InfraredNight;
  if (s == "sar") return SensorKind::Sar;
  throw Error("unknown sensor kind: " + s);
}

std::map<int, BudgetRow> standard_budget_rows(SensorKind kind) {
  if (kind == SensorKind::ElectroOptical) {
    return {{1, {500000.0, 100.0}}, {4, {10000.0, 90.0}}, {9, {500.0, 20.0}}};
  }
  return {{1, {500000.0, 100.0}}, {2, {100000.0, 100.0}}, {3, {50000.0, 90.0}},
          {4, {10000.0, 90.0}},   {5, {5000.0, 80.0}},    {6, {1000.0, 80.0}},
          {7, {500.0, 70.0}},     {8, {100.0, 50.0}},     {9, {50.0, 40.0}}};
}

const Sensor& Scenario::sensor_of(int s) const {
  const auto& id = swath(s).sensor_id;
  auto it = sensors.find(id);
  if (it == sensors.end()) throw Error("swath " + std::to_string(s) + " references missing sensor '" + id + "'");
  return it->second;
}

const PenaltyCurve& Scenario::curve_of(int c) const {
  const auto& id = cell(c).curve_id;
  auto it = curves.find(id);
  if (it == curves.end()) throw Error("cell " + std::to_string(c) + " references missing curve '" + id + "'");
  return it->second;
}

std::optional<double> cost_factor(const Sensor& sensor, int r, double cell_area) {
  auto it = sensor.budget_rows.find(r);
  if (it == sensor.budget_rows.end()) {
    throw Error("sensor '" + sensor.id + "' has no budget row for resolution " + std::to_string(r));
  }
  const double cells_in_area = it->second.area_budget / cell_area;
  const double cost = 1.0 / std::min(cells_in_area, it->second.look_budget);
  if (cost > 1.0) return std::nullopt;
  return cost;
}

std::optional<double> swath_cost(const Scenario& sc, int s, int r) {
  const Sensor& sensor = sc.sensor_of(s);
  if (!sensor.budget_rows.contains(r)) return std::nullopt;
  return cost_factor(sensor, r, sc.cell_area);
}

double eval_curve(const PenaltyCurve& curve, double dt) {
  if (!(dt >= 0.0)) throw Error("eval_curve: negative elapsed time");
  if (dt == 0.0) return 0.0;
  const auto& bp = curve.breakpoints;
  if (bp.empty()) throw Error("eval_curve: curve has no breakpoints");
  auto it = std::lower_bound(bp.begin(), bp.end(), dt,
                             [](const Breakpoint& b, double t) { return b.t < t; });
  if (it != bp.end() && it->t == dt) return it->p;
  if (it == bp.end()) {
    if (bp.size() < 2) return bp.back().p;
    const Breakpoint& a = bp[bp.size() - 2];
    const Breakpoint& b = bp.back();
    return b.p + (b.p - a.p) / (b.t - a.t) * (dt - b.t);
  }
  const Breakpoint& b = *it;
  const Breakpoint& a = *(it - 1);
  const double v = a.p + (b.p - a.p) * ((dt - a.t) / (b.t - a.t));
  return std::clamp(v, a.p, b.p);  // keeps rounding from breaking monotonicity at b.t
}

PenaltyTable::PenaltyTable(int cells, int swaths)
    : cells_(cells),
      swaths_(swaths),
      block_(static_cast<std::size_t>(swaths) * static_cast<std::size_t>(swaths + 3) / 2),
      data_(block_ * static_cast<std::size_t>(cells), 0.0) {}

std::size_t PenaltyTable::offset(int c, int s, int g) const {
  if (c < 1 || c > cells_ || s < 1 || s > swaths_ || g < 0 || g > s) {
    std::ostringstream os;
    os << "pen index out of range: c=" << c << " s=" << s << " g=" << g;
    throw Error(os.str());
  }
  const auto su = static_cast<std::size_t>(s);
  return static_cast<std::size_t>(c - 1) * block_ + (su - 1) * (su + 2) / 2 + static_cast<std::size_t>(g);
}

PenaltyTable precompute_pen(const Scenario& sc) {
  const int C = sc.num_cells();
  const int S = sc.num_swaths();
  PenaltyTable pen(C, S);
  auto time_of = [&](int s) { return s == 0 ? 0.0 : sc.swath(s).time; };

  // Cells sharing a curve share a slice; evaluate each curve once.
  std::map<std::string, std::vector<double>> slices;
  for (int c = 1; c <= C; ++c) {
    const auto& id = sc.cell(c).curve_id;
    auto [it, inserted] = slices.try_emplace(id);
    if (inserted) {
      const PenaltyCurve& curve = sc.curve_of(c);
      for (int s = 1; s <= S; ++s) {
        it->second.push_back(0.0);
        for (int g = 1; g <= s; ++g) {
          it->second.push_back(eval_curve(curve, time_of(s) - time_of(s - g)));
        }
      }
    }
    std::size_t k = 0;
    for (int s = 1; s <= S; ++s) {
      for (int g = 0; g <= s; ++g) pen.at(c, s, g) = it->second[k++];
    }
  }
  return pen;
}

std::vector<std::string> validate(const Scenario& sc) {
  std::vector<std::string> out;
  auto add = [&out](std::string msg) { out.push_back(std::move(msg)); };

  if (!(sc.never > 0.0)) add("params: never must be > 0");
  if (!(sc.cell_area > 0.0)) add("params: cell_area must be > 0");
  if (sc.R < 1 || sc.R > 9) add("params: R must be in 1..9");
  if (sc.maxlow < 0) add("params: maxlow must be >= 0");
  if (sc.looks_required < 1) add("params: looks_required must be >= 1");

  for (const auto& [id, curve] : sc.curves) {
    const auto& bp = curve.breakpoints;
    if (bp.empty()) {
      add("curve '" + id + "': no breakpoints");
      continue;
    }
    if (bp.front().t != 0.0 || bp.front().p != 0.0) add("curve '" + id + "': first breakpoint must be (0, 0)");
    for (std::size_t i = 1; i < bp.size(); ++i) {
      if (!(bp[i].t > bp[i - 1].t)) {
        add("curve '" + id + "': breakpoints not strictly increasing in t");
        break;
      }
    }
    for (std::size_t i = 1; i < bp.size(); ++i) {
      if (bp[i].p < bp[i - 1].p) {
        add("curve '" + id + "': curve not nondecreasing in p");
        break;
      }
    }
    for (const auto& b : bp) {
      if (b.t < 0.0 || b.p < 0.0 || !std::isfinite(b.t) || !std::isfinite(b.p)) {
        add("curve '" + id + "': breakpoints must be finite and >= 0");
        break;
      }
    }
  }

  for (const auto& [id, sensor] : sc.sensors) {
    if (sensor.id != id) add("sensor '" + id + "': id field '" + sensor.id + "' does not match its key");
    if (sensor.budget_rows.empty()) add("sensor '" + id + "': no budget rows");
    for (const auto& [r, row] : sensor.budget_rows) {
      if (r < 1 || r > 9) add("sensor '" + id + "': resolution " + std::to_string(r) + " outside 1..9");
      if (!(row.area_budget > 0.0) || !(row.look_budget > 0.0)) {
        add("sensor '" + id + "': budgets for resolution " + std::to_string(r) + " must be > 0");
      }
    }
  }

  std::set<std::pair<int, int>> positions;
  for (std::size_t i = 0; i < sc.cells.size(); ++i) {
    const GridCell& cell = sc.cells[i];
    const std::string tag = "cell " + std::to_string(cell.id);
    if (cell.id != static_cast<int>(i) + 1) {
      add(tag + ": ids must be dense 1..C in order (position " + std::to_string(i + 1) + ")");
    }
    if (cell.rmin < 1 || cell.rmin > sc.R) add(tag + ": rmin " + std::to_string(cell.rmin) + " outside 1..R");
    if (!positions.insert({cell.row, cell.col}).second) {
      add(tag + ": duplicate grid position (" + std::to_string(cell.row) + ", " + std::to_string(cell.col) + ")");
    }
    if (!sc.curves.contains(cell.curve_id)) add(tag + ": references missing curve '" + cell.curve_id + "'");
  }

  const int C = sc.num_cells();
  for (std::size_t i = 0; i < sc.swaths.size(); ++i) {
    const Swath& sw = sc.swaths[i];
    const std::string tag = "swath " + std::to_string(sw.index);
    if (sw.index != static_cast<int>(i) + 1) {
      add(tag + ": indices must be dense 1..S in order (position " + std::to_string(i + 1) + ")");
    }
    if (!(sw.time > 0.0)) add(tag + ": time must be > 0");
    if (i > 0 && sw.time < sc.swaths[i - 1].time) add(tag + ": times must be nondecreasing");
    if (!sc.sensors.contains(sw.sensor_id)) add(tag + ": references missing sensor '" + sw.sensor_id + "'");
    if (const auto* ex = std::get_if<ExplicitFootprint>(&sw.footprint)) {
      std::set<int> seen;
      for (int c : ex->cells) {
        if (c < 1 || c > C) add(tag + ": footprint references missing cell " + std::to_string(c));
        if (!seen.insert(c).second) add(tag + ": footprint lists cell " + std::to_string(c) + " twice");
      }
    } else {
      const auto& strip = std::get<StripFootprint>(sw.footprint);
      if (strip.entry == strip.exit) add(tag + ": degenerate strip (entry == exit)");
      if (!(strip.width > 0.0)) add(tag + ": strip width must be > 0");
    }
  }
  return out;
}

void require_valid(const Scenario& sc) {
  auto violations = validate(sc);
  if (violations.empty()) return;
  std::string msg = "invalid scenario:";
  for (const auto& v : violations) msg += "\n  " + v;
  throw Error(msg);
}

}  // namespace lom
