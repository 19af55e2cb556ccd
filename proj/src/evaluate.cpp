#include "lom/evaluate.hpp"

#include <algorithm>
#include <cstdio>
#include <set>
#include <sstream>

#include "lom/model.hpp"
#include "lom/scenario_io.hpp"

namespace lom {

namespace {

constexpr PriorityClass kClasses[] = {PriorityClass::High, PriorityClass::Low};

std::string percent(double fraction) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.1f%%", 100.0 * fraction);
  return buf;
}

std::string fixed(double v, int places) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", places, v);
  return buf;
}

std::string bracket(const ClassCounts& k) {
  std::string s = std::to_string(k.unique_cells);
  if (k.total_looks != k.unique_cells) s += " [" + std::to_string(k.total_looks) + "]";
  return s;
}

std::string pad_left(const std::string& s, std::size_t w) {
  return s.size() >= w ? s : std::string(w - s.size(), ' ') + s;
}

std::string pad_right(const std::string& s, std::size_t w) {
  return s.size() >= w ? s : s + std::string(w - s.size(), ' ');
}

nlohmann::json counts_json(const ClassCounts& k) {
  return {{"unique_cells", k.unique_cells}, {"total_looks", k.total_looks}};
}

void check_plan_indices(const Scenario& sc, const LookPlan& plan) {
  for (const Look& l : plan.looks) {
    if (l.c < 1 || l.c > sc.num_cells() || l.s < 1 || l.s > sc.num_swaths()) {
      throw Error("look (" + std::to_string(l.c) + "," + std::to_string(l.s) + "," + std::to_string(l.r) +
                  ") is outside the scenario");
    }
  }
}

}  // namespace

GapTable simulate_gaps(const Scenario& sc, const LookPlan& plan) {
  check_plan_indices(sc, plan);
  const int C = sc.num_cells();
  const int S = sc.num_swaths();
  std::vector<std::vector<char>> looked(static_cast<std::size_t>(C), std::vector<char>(static_cast<std::size_t>(S) + 1, 0));
  for (const Look& l : plan.looks) looked[static_cast<std::size_t>(l.c - 1)][static_cast<std::size_t>(l.s)] = 1;
  GapTable gaps(static_cast<std::size_t>(C), std::vector<int>(static_cast<std::size_t>(S) + 1, 0));
  for (std::size_t c = 0; c < gaps.size(); ++c) {
    for (std::size_t s = 1; s <= static_cast<std::size_t>(S); ++s) {
      gaps[c][s] = looked[c][s] ? 0 : gaps[c][s - 1] + 1;
    }
  }
  return gaps;
}

PenaltyBreakdown penalty_breakdown(const Scenario& sc, const PenaltyTable& pen, const LookPlan& plan) {
  const GapTable gaps = simulate_gaps(sc, plan);
  std::vector<int> looks(static_cast<std::size_t>(sc.num_cells()), 0);
  for (const Look& l : plan.looks) ++looks[static_cast<std::size_t>(l.c - 1)];

  PenaltyBreakdown out;
  for (int c = 1; c <= sc.num_cells(); ++c) {
    for (int s = 1; s <= sc.num_swaths(); ++s) {
      out.penalty_total += pen(c, s, gaps[static_cast<std::size_t>(c - 1)][static_cast<std::size_t>(s)]);
    }
  }
  double shortfall = 0.0;
  for (int c = 1; c <= sc.num_cells(); ++c) {
    shortfall += std::clamp(sc.looks_required - looks[static_cast<std::size_t>(c - 1)], 0, 1);
  }
  out.never_total = sc.never * shortfall;
  out.objective = out.penalty_total + out.never_total;
  return out;
}

double objective_value(const Scenario& sc, const PenaltyTable& pen, const LookPlan& plan) {
  return penalty_breakdown(sc, pen, plan).objective;
}

EvalReport coverage_report(const Scenario& sc, const PenaltyTable& pen, const CoverageSets& cov,
                           const LookPlan& plan) {
  EvalReport rep;
  rep.scenario_fingerprint = scenario_fingerprint(sc);
  rep.num_cells = sc.num_cells();
  rep.num_swaths = sc.num_swaths();
  rep.R = sc.R;
  for (PriorityClass pc : kClasses) {
    rep.per_class[pc] = {};
    for (int r = 1; r <= sc.R; ++r) rep.per_resolution[r][pc] = {};
  }

  // Sorted copy so the report does not depend on the plan's list order.
  LookPlan sorted = plan;
  sorted.normalize();
  auto add = [&rep](const std::string& kind, const std::string& detail) { rep.violations.push_back({kind, detail}); };
  auto look_tag = [](const Look& l) {
    return "look (" + std::to_string(l.c) + "," + std::to_string(l.s) + "," + std::to_string(l.r) + ")";
  };

  LookPlan valid;
  // The MILP may look at one (cell, swath) at several resolutions; only an
  // exact repeat of a record is a duplicate.
  std::set<Look> seen;
  std::vector<double> spent(static_cast<std::size_t>(sc.num_swaths()) + 1, 0.0);
  std::vector<int> low_looks(static_cast<std::size_t>(sc.num_cells()) + 1, 0);
  for (const Look& l : sorted.looks) {
    if (l.c < 1 || l.c > sc.num_cells() || l.s < 1 || l.s > sc.num_swaths() || l.r < 1 || l.r > sc.R) {
      add("index", look_tag(l) + " is outside the scenario");
      continue;
    }
    valid.looks.push_back(l);
    if (!seen.insert(l).second) add("duplicate", look_tag(l) + " is listed twice");
    if (!cov.covers(l.s, l.c)) add("footprint", look_tag(l) + " is outside the swath footprint");
    if (auto cost = swath_cost(sc, l.s, l.r)) {
      spent[static_cast<std::size_t>(l.s)] += *cost;
    } else {
      add("budget", look_tag(l) + " uses a resolution unavailable to sensor '" + sc.swath(l.s).sensor_id + "'");
    }
    if (l.r < sc.cell(l.c).rmin) ++low_looks[static_cast<std::size_t>(l.c)];
  }
  for (int s = 1; s <= sc.num_swaths(); ++s) {
    const double used = spent[static_cast<std::size_t>(s)];
    if (used > 1.0 + 1e-9) add("budget", "swath " + std::to_string(s) + " spends " + format_number(used) + " of budget 1");
  }

  std::vector<int> looks(static_cast<std::size_t>(sc.num_cells()) + 1, 0);
  std::map<int, std::set<int>> cells_at_r;
  for (const Look& l : valid.looks) {
    ++looks[static_cast<std::size_t>(l.c)];
    const PriorityClass pc = sc.cell(l.c).priority_class;
    ++rep.per_class[pc].total_looks;
    ++rep.per_resolution[l.r][pc].total_looks;
    if (cells_at_r[l.r].insert(l.c).second) ++rep.per_resolution[l.r][pc].unique_cells;
  }

  int looked_cells = 0;
  for (int c = 1; c <= sc.num_cells(); ++c) {
    const int n = looks[static_cast<std::size_t>(c)];
    if (n > 0) {
      ++looked_cells;
      ++rep.per_class[sc.cell(c).priority_class].unique_cells;
    }
    if (low_looks[static_cast<std::size_t>(c)] > sc.maxlow) {
      add("rmin", "cell " + std::to_string(c) + " has " + std::to_string(low_looks[static_cast<std::size_t>(c)]) +
                      " looks below rmin " + std::to_string(sc.cell(c).rmin) + " (maxlow " + std::to_string(sc.maxlow) + ")");
    }
    if (n < sc.looks_required) {
      add("coverage", "cell " + std::to_string(c) + " has " + std::to_string(n) + " of " +
                          std::to_string(sc.looks_required) + " required looks");
    }
  }
  for (PriorityClass pc : kClasses) {
    rep.total.unique_cells += rep.per_class[pc].unique_cells;
    rep.total.total_looks += rep.per_class[pc].total_looks;
  }
  rep.coverage_pct = sc.num_cells() > 0 ? static_cast<double>(looked_cells) / sc.num_cells() : 0.0;

  const PenaltyBreakdown pb = penalty_breakdown(sc, pen, valid);
  rep.total_penalty = pb.penalty_total;
  rep.never_penalty = pb.never_total;
  rep.objective = pb.objective;
  return rep;
}

Comparison compare(const EvalReport& a, const EvalReport& b, std::string label_a, std::string label_b) {
  if (a.scenario_fingerprint != b.scenario_fingerprint) {
    throw Error("cannot compare reports from different scenarios (" + a.scenario_fingerprint + " vs " +
                b.scenario_fingerprint + ")");
  }
  Comparison cmp;
  cmp.label_a = std::move(label_a);
  cmp.label_b = std::move(label_b);
  cmp.a = a;
  cmp.b = b;
  cmp.coverage_delta = a.coverage_pct - b.coverage_pct;
  if (b.coverage_pct > 0.0) cmp.relative_improvement = (a.coverage_pct - b.coverage_pct) / b.coverage_pct;
  for (PriorityClass pc : kClasses) {
    cmp.per_class[pc] = {a.per_class.at(pc), b.per_class.at(pc)};
  }
  for (int r = 1; r <= std::max(a.R, b.R); ++r) {
    for (PriorityClass pc : kClasses) {
      CountDelta d;
      if (auto it = a.per_resolution.find(r); it != a.per_resolution.end()) d.a = it->second.at(pc);
      if (auto it = b.per_resolution.find(r); it != b.per_resolution.end()) d.b = it->second.at(pc);
      cmp.per_resolution[r][pc] = d;
    }
  }
  cmp.total = {a.total, b.total};
  return cmp;
}

ImprovementSummary summarize_improvements(const std::vector<std::optional<double>>& improvements) {
  ImprovementSummary out;
  std::vector<double> vals;
  for (const auto& v : improvements) {
    if (v) vals.push_back(*v);
    else ++out.undefined;
  }
  out.defined = vals.size();
  if (vals.empty()) return out;
  double sum = 0.0;
  for (double v : vals) sum += v;
  out.mean = sum / static_cast<double>(vals.size());
  std::sort(vals.begin(), vals.end());
  const std::size_t n = vals.size();
  out.median = n % 2 == 1 ? vals[n / 2] : 0.5 * (vals[n / 2 - 1] + vals[n / 2]);
  return out;
}

nlohmann::json report_to_json(const EvalReport& r) {
  nlohmann::json j;
  j["scenario_fingerprint"] = r.scenario_fingerprint;
  j["num_cells"] = r.num_cells;
  j["num_swaths"] = r.num_swaths;
  j["R"] = r.R;
  j["coverage_pct"] = r.coverage_pct;
  for (const auto& [pc, k] : r.per_class) j["per_class"][to_string(pc)] = counts_json(k);
  for (const auto& [res, byclass] : r.per_resolution) {
    for (const auto& [pc, k] : byclass) j["per_resolution"][std::to_string(res)][to_string(pc)] = counts_json(k);
  }
  j["total"] = counts_json(r.total);
  j["total_penalty"] = r.total_penalty;
  j["never_penalty"] = r.never_penalty;
  j["objective"] = r.objective;
  j["violations"] = nlohmann::json::array();
  for (const auto& v : r.violations) j["violations"].push_back({{"kind", v.kind}, {"detail", v.detail}});
  return j;
}

nlohmann::json comparison_to_json(const Comparison& c) {
  nlohmann::json j;
  j["labels"] = {c.label_a, c.label_b};
  j["a"] = report_to_json(c.a);
  j["b"] = report_to_json(c.b);
  j["coverage_delta"] = c.coverage_delta;
  if (c.relative_improvement) j["relative_improvement"] = *c.relative_improvement;
  else j["relative_improvement"] = kUndefinedMarker;
  for (const auto& [pc, d] : c.per_class) {
    j["per_class"][to_string(pc)] = {{"unique_delta", d.unique_delta()}, {"looks_delta", d.looks_delta()}};
  }
  for (const auto& [res, byclass] : c.per_resolution) {
    for (const auto& [pc, d] : byclass) {
      j["per_resolution"][std::to_string(res)][to_string(pc)] = {{"unique_delta", d.unique_delta()},
                                                                 {"looks_delta", d.looks_delta()}};
    }
  }
  j["total"] = {{"unique_delta", c.total.unique_delta()}, {"looks_delta", c.total.looks_delta()}};
  return j;
}

std::string format_report_table(const EvalReport& r) {
  std::ostringstream os;
  os << "scenario " << r.scenario_fingerprint << "  cells " << r.num_cells << "  swaths " << r.num_swaths << "\n";
  os << "coverage " << percent(r.coverage_pct) << "\n\n";
  os << pad_right("class", 8) << pad_left("cells [looks]", 15);
  for (int res = 1; res <= r.R; ++res) os << pad_left("r=" + std::to_string(res), 12);
  os << "\n";
  auto line = [&](const std::string& name, const ClassCounts& k, auto per_r) {
    os << pad_right(name, 8) << pad_left(bracket(k), 15);
    for (int res = 1; res <= r.R; ++res) os << pad_left(bracket(per_r(res)), 12);
    os << "\n";
  };
  for (const auto& [pc, k] : r.per_class) {
    line(to_string(pc), k, [&](int res) { return r.per_resolution.at(res).at(pc); });
  }
  line("total", r.total, [&](int res) {
    ClassCounts sum;
    for (const auto& [pc, k] : r.per_resolution.at(res)) {
      sum.unique_cells += k.unique_cells;
      sum.total_looks += k.total_looks;
    }
    return sum;
  });
  os << "\npenalty " << fixed(r.total_penalty, 6) << "  never " << fixed(r.never_penalty, 6) << "  objective "
     << fixed(r.objective, 6) << "\n";
  os << "violations " << r.violations.size() << "\n";
  for (const auto& v : r.violations) os << "  " << v.kind << ": " << v.detail << "\n";
  return os.str();
}

std::string format_comparison_table(const Comparison& c) {
  std::ostringstream os;
  const std::size_t w = std::max<std::size_t>(14, std::max(c.label_a.size(), c.label_b.size()) + 2);
  os << pad_right("", 12) << pad_left(c.label_a, w) << pad_left(c.label_b, w) << pad_left("delta", w) << "\n";
  os << pad_right("coverage", 12) << pad_left(percent(c.a.coverage_pct), w) << pad_left(percent(c.b.coverage_pct), w)
     << pad_left(percent(c.coverage_delta), w) << "\n";
  auto row = [&](const std::string& name, const CountDelta& d) {
    os << pad_right(name, 12) << pad_left(bracket(d.a), w) << pad_left(bracket(d.b), w)
       << pad_left(std::to_string(d.unique_delta()) + " [" + std::to_string(d.looks_delta()) + "]", w) << "\n";
  };
  for (const auto& [pc, d] : c.per_class) row(to_string(pc), d);
  row("total", c.total);
  for (const auto& [res, byclass] : c.per_resolution) {
    for (const auto& [pc, d] : byclass) row("r=" + std::to_string(res) + " " + to_string(pc), d);
  }
  os << pad_right("objective", 12) << pad_left(fixed(c.a.objective, 3), w) << pad_left(fixed(c.b.objective, 3), w)
     << pad_left(fixed(c.a.objective - c.b.objective, 3), w) << "\n";
  os << "relative coverage improvement: "
     << (c.relative_improvement ? percent(*c.relative_improvement) : std::string(kUndefinedMarker)) << "\n";
  return os.str();
}

std::string comparison_csv_header() {
  return "scenario,label_a,label_b,coverage_a,coverage_b,coverage_delta,relative_improvement,"
         "high_cells_a,high_cells_b,low_cells_a,low_cells_b,looks_a,looks_b,objective_a,objective_b";
}

std::string comparison_csv_row(const std::string& scenario_label, const Comparison& c) {
  std::ostringstream os;
  os << scenario_label << ',' << c.label_a << ',' << c.label_b << ',' << format_number(c.a.coverage_pct) << ','
     << format_number(c.b.coverage_pct) << ',' << format_number(c.coverage_delta) << ','
     << (c.relative_improvement ? format_number(*c.relative_improvement) : std::string(kUndefinedMarker)) << ','
     << c.per_class.at(PriorityClass::High).a.unique_cells << ',' << c.per_class.at(PriorityClass::High).b.unique_cells
     << ',' << c.per_class.at(PriorityClass::Low).a.unique_cells << ','
     << c.per_class.at(PriorityClass::Low).b.unique_cells << ',' << c.total.a.total_looks << ','
     << c.total.b.total_looks << ',' << format_number(c.a.objective) << ',' << format_number(c.b.objective);
  return os.str();
}

std::string penalty_trajectory_data(const Scenario& sc, const PenaltyTable& pen, const LookPlan& plan) {
  const GapTable gaps = simulate_gaps(sc, plan);
  std::ostringstream os;
  os << "# swath time";
  for (int c = 1; c <= sc.num_cells(); ++c) os << " c" << c;
  os << "\n";
  for (int s = 1; s <= sc.num_swaths(); ++s) {
    os << s << ' ' << format_number(sc.swath(s).time);
    for (int c = 1; c <= sc.num_cells(); ++c) {
      os << ' ' << format_number(pen(c, s, gaps[static_cast<std::size_t>(c - 1)][static_cast<std::size_t>(s)]));
    }
    os << "\n";
  }
  return os.str();
}

}  // namespace lom
