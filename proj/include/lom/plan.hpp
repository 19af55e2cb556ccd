#pragma once

// LookPlan: the list of (cell, swath, resolution) looks shared by the greedy
// heuristic, the exact oracle and decoded MILP solutions. Plan files are a
// JSON array of {"c", "s", "r"} records.

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lom/geometry.hpp"
#include "lom/scenario.hpp"

namespace lom {

struct Look {
  int c = 0;
  int s = 0;
  int r = 0;
  auto operator<=>(const Look&) const = default;
};

struct LookPlan {
  std::vector<Look> looks;

  // Sorts by (s, c, r).
  void normalize();
  bool operator==(const LookPlan&) const = default;
};

// Structural checks: unique (c, s) pairs, coverage of each look by its swath,
// and per-swath budget sum <= 1 + 1e-9. Empty when the plan is sound.
std::vector<std::string> plan_invariant_violations(const Scenario& sc, const CoverageSets& cov,
                                                   const LookPlan& plan);

nlohmann::json plan_to_json(const LookPlan& plan);
LookPlan plan_from_json(const nlohmann::json& j);
LookPlan load_plan(const std::filesystem::path& path);
void save_plan(const LookPlan& plan, const std::filesystem::path& path);

}  // namespace lom
