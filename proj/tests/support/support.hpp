#pragma once

// Shared helpers for the unit and acceptance tests: seeded tiny scenarios and
// reference computations that do not go through the library code they check.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "lom/geometry.hpp"
#include "lom/model.hpp"
#include "lom/plan.hpp"
#include "lom/scenario.hpp"

namespace lomtest {

struct TinyParams {
  int min_cells = 1;
  int max_cells = 6;
  int min_swaths = 1;
  int max_swaths = 4;
  int max_r = 2;
  double never_lo = 1.0;
  double never_hi = 50.0;
  bool random_rmin = true;
  bool random_maxlow = true;
  int looks_required = 1;
  double cover_prob = 0.6;
};

lom::Scenario random_tiny_scenario(std::uint64_t seed, const TinyParams& p = {});

// Sum of pen over (c, s >= 1) at the simulated gaps plus the never term,
// computed swath-major with its own gap bookkeeping.
double reference_objective(const lom::Scenario& sc, const lom::PenaltyTable& pen, const lom::LookPlan& plan);

// Optimum over every plan with distinct (cell, swath) pairs, budget-feasible
// swaths and at most maxlow looks below rmin per cell. No pruning at all.
struct BruteResult {
  double objective = 0.0;
  int uncovered = 0;
  std::int64_t leaves = 0;
};
BruteResult brute_force_optimum(const lom::Scenario& sc, const lom::PenaltyTable& pen, const lom::CoverageSets& cov);

// Point-in-strip by projecting onto the strip axis.
bool reference_covers(const lom::Point& p, const lom::Point& a, const lom::Point& b, double width);

// Optimum of a parsed sparse model by enumerating its X columns, completing
// each point with the smallest gaps and reading the objective off the file's
// coefficients. nullopt when more than max_leaves X vectors would be visited.
std::optional<double> enumerate_parsed_milp(const lom::ParsedModel& pm, std::int64_t max_leaves);

// Objective of a `name -> value` point under a parsed model's coefficients.
double parsed_objective(const lom::ParsedModel& pm, const lom::ModelInstance& m, const lom::Assignment& a);

// True when the bundled solver adapter finds a MILP backend.
bool external_solver_available();

std::filesystem::path fresh_temp_dir(const std::string& tag);

}  // namespace lomtest
