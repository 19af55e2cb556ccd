#pragma once

// Plan simulation and reporting. Any LookPlan (greedy, exact, decoded MILP)
// can be replayed against a scenario to get gap trajectories, penalties,
// coverage and a violation list. Violations are data; infeasible plans are
// still evaluated.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lom/geometry.hpp"
#include "lom/plan.hpp"
#include "lom/scenario.hpp"

namespace lom {

// gaps[c-1][s] for s = 0..S.
using GapTable = std::vector<std::vector<int>>;

GapTable simulate_gaps(const Scenario& sc, const LookPlan& plan);

struct PenaltyBreakdown {
  double penalty_total = 0.0;  // sum_{c, s>=1} pen[c][s][gap[c][s]]
  double never_total = 0.0;    // never * sum_c clamp(looks_required - looks_c, 0, 1)
  double objective = 0.0;
};

// Sums run cell-major (c outer, s inner) and the never term is scaled once at
// the end; decode_solution uses the same order so the two agree bitwise.
PenaltyBreakdown penalty_breakdown(const Scenario& sc, const PenaltyTable& pen, const LookPlan& plan);
double objective_value(const Scenario& sc, const PenaltyTable& pen, const LookPlan& plan);

struct ClassCounts {
  int unique_cells = 0;
  int total_looks = 0;
  bool operator==(const ClassCounts&) const = default;
};

struct ReportViolation {
  std::string kind;  // budget | rmin | coverage | footprint | duplicate | index
  std::string detail;
  bool operator==(const ReportViolation&) const = default;
};

struct EvalReport {
  std::string scenario_fingerprint;
  int num_cells = 0;
  int num_swaths = 0;
  int R = 0;
  double coverage_pct = 0.0;  // fraction in [0, 1]
  std::map<PriorityClass, ClassCounts> per_class;
  std::map<int, std::map<PriorityClass, ClassCounts>> per_resolution;  // r = 1..R
  ClassCounts total;
  double total_penalty = 0.0;
  double never_penalty = 0.0;
  double objective = 0.0;
  std::vector<ReportViolation> violations;

  bool operator==(const EvalReport&) const = default;
};

EvalReport coverage_report(const Scenario& sc, const PenaltyTable& pen, const CoverageSets& cov,
                           const LookPlan& plan);

struct CountDelta {
  ClassCounts a;
  ClassCounts b;
  int unique_delta() const { return a.unique_cells - b.unique_cells; }
  int looks_delta() const { return a.total_looks - b.total_looks; }
};

struct Comparison {
  std::string label_a = "A";
  std::string label_b = "B";
  EvalReport a;
  EvalReport b;
  double coverage_delta = 0.0;
  // (a - b) / b; absent when b has zero coverage.
  std::optional<double> relative_improvement;
  std::map<PriorityClass, CountDelta> per_class;
  std::map<int, std::map<PriorityClass, CountDelta>> per_resolution;
  CountDelta total;
};

// Throws Error when the reports come from different scenarios.
Comparison compare(const EvalReport& a, const EvalReport& b, std::string label_a = "A", std::string label_b = "B");

struct ImprovementSummary {
  std::size_t defined = 0;    // entries with a relative improvement
  std::size_t undefined = 0;  // baseline coverage was zero
  double mean = 0.0;
  double median = 0.0;
};

ImprovementSummary summarize_improvements(const std::vector<std::optional<double>>& improvements);

// Text used where a relative improvement is undefined.
inline constexpr const char* kUndefinedMarker = "undefined";

nlohmann::json report_to_json(const EvalReport& r);
nlohmann::json comparison_to_json(const Comparison& c);
std::string format_report_table(const EvalReport& r);
std::string format_comparison_table(const Comparison& c);
std::string comparison_csv_header();
std::string comparison_csv_row(const std::string& scenario_label, const Comparison& c);

// Whitespace-separated columns: swath index, time, then the per-swath penalty
// of every cell. Loads directly into gnuplot.
std::string penalty_trajectory_data(const Scenario& sc, const PenaltyTable& pen, const LookPlan& plan);

}  // namespace lom
