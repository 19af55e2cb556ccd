#pragma once

// Seeded synthetic scenarios. Cells sit on a planar grid; each satellite
// makes evenly spaced passes modeled as straight strips across the grid with
// a random heading, and every sensor on the satellite yields one swath per
// pass at the same time.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lom/scenario.hpp"

namespace lom {

struct GridSpec {
  int rows = 0;
  int cols = 0;
  double cell_km = 50.0;
};

struct SatelliteSpec {
  std::string name;
  std::vector<SensorKind> sensors;
  double passes_per_day = 4.0;
  // Time of the first pass; drawn from (0, 24 / passes_per_day] when absent.
  std::optional<double> first_pass_hours;
};

struct GenSpec {
  std::uint64_t seed = 1;
  GridSpec grid;
  int n_high = 0;
  int n_low = 0;
  double horizon_hours = 12.0;
  double swath_width_km = 150.0;
  std::vector<SatelliteSpec> satellites;
  PenaltyCurve high_curve;
  PenaltyCurve low_curve;
  int R = 5;
  int rmin = 4;
  double never = 100000.0;
  int maxlow = 0;
  int looks_required = 1;
};

// Steep template for high-priority cells, shallow for low priority.
PenaltyCurve default_high_curve();
PenaltyCurve default_low_curve();

// Missing keys take GenSpec defaults. `satellites` may be given explicitly, or
// as n_satellites + passes_per_day + sensors shared by all satellites.
GenSpec genspec_from_json(const nlohmann::json& j);
nlohmann::json genspec_to_json(const GenSpec& spec);
GenSpec load_genspec(const std::filesystem::path& path);

// Throws Error on an infeasible spec. The result always passes validate().
Scenario generate(const GenSpec& spec);

}  // namespace lom
