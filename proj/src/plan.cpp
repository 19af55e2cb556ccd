#include "lom/plan.hpp"

#include <algorithm>
#include <set>

#include "lom/scenario_io.hpp"

namespace lom {

void LookPlan::normalize() {
  std::sort(looks.begin(), looks.end(), [](const Look& a, const Look& b) {
    return std::tie(a.s, a.c, a.r) < std::tie(b.s, b.c, b.r);
  });
}

std::vector<std::string> plan_invariant_violations(const Scenario& sc, const CoverageSets& cov,
                                                   const LookPlan& plan) {
  std::vector<std::string> out;
  std::set<std::pair<int, int>> seen;
  std::vector<double> spent(static_cast<std::size_t>(sc.num_swaths()) + 1, 0.0);
  for (const Look& l : plan.looks) {
    const std::string tag = "look (" + std::to_string(l.c) + "," + std::to_string(l.s) + "," + std::to_string(l.r) + ")";
    if (l.c < 1 || l.c > sc.num_cells() || l.s < 1 || l.s > sc.num_swaths()) {
      out.push_back(tag + ": index out of range");
      continue;
    }
    if (!seen.insert({l.c, l.s}).second) out.push_back(tag + ": duplicate (cell, swath) pair");
    if (!cov.covers(l.s, l.c)) out.push_back(tag + ": cell not covered by swath");
    const auto cost = swath_cost(sc, l.s, l.r);
    if (!cost) {
      out.push_back(tag + ": resolution unavailable for swath sensor");
      continue;
    }
    spent[static_cast<std::size_t>(l.s)] += *cost;
  }
  for (int s = 1; s <= sc.num_swaths(); ++s) {
    if (spent[static_cast<std::size_t>(s)] > 1.0 + 1e-9) {
      out.push_back("swath " + std::to_string(s) + ": budget exceeded (" + std::to_string(spent[static_cast<std::size_t>(s)]) + ")");
    }
  }
  return out;
}

nlohmann::json plan_to_json(const LookPlan& plan) {
  nlohmann::json j = nlohmann::json::array();
  for (const Look& l : plan.looks) j.push_back({{"c", l.c}, {"s", l.s}, {"r", l.r}});
  return j;
}

LookPlan plan_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw Error("plan file must be a JSON array of {c, s, r} records");
  LookPlan plan;
  try {
    for (const auto& jl : j) plan.looks.push_back({jl.at("c").get<int>(), jl.at("s").get<int>(), jl.at("r").get<int>()});
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed plan record: ") + e.what());
  }
  return plan;
}

LookPlan load_plan(const std::filesystem::path& path) { return plan_from_json(read_json_file(path)); }

void save_plan(const LookPlan& plan, const std::filesystem::path& path) {
  write_text_file(path, plan_to_json(plan).dump() + "\n");
}

}  // namespace lom
