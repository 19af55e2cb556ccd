#pragma once

// Greedy look allocation at a fixed, user-chosen resolution. Swaths are
// processed in index order; each ranks its covered cells by pending penalty
// (curve value at the time since that cell's last look) and allocates looks
// down the ranking until the next one would exceed the unit budget.
//
// Ties in pending penalty go north-to-south, then west-to-east. rmin and
// maxlow are ignored here; the evaluator reports any violations.

#include "lom/geometry.hpp"
#include "lom/plan.hpp"
#include "lom/scenario.hpp"

namespace lom {

// Throws Error when `resolution` is outside 1..R or unavailable for some
// swath's sensor.
LookPlan greedy_plan(const Scenario& sc, const CoverageSets& cov, int resolution);

}  // namespace lom
