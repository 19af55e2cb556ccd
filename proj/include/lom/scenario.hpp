#pragma once

// Problem data for look allocation: grid cells, penalty curves, sensors,
// swaths and global parameters. A Scenario is immutable once validated and
// every other module reads from it.

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace lom {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Point {
  double x = 0.0;  // km, east
  double y = 0.0;  // km, north
  bool operator==(const Point&) const = default;
};

enum class PriorityClass { High, Low };

std::string to_string(PriorityClass pc);
PriorityClass parse_priority_class(const std::string& s);

struct GridCell {
  int id = 0;   // 1..C
  int row = 0;  // 0 = northernmost
  int col = 0;  // 0 = westernmost
  Point center;
  PriorityClass priority_class = PriorityClass::Low;
  std::string curve_id;
  int rmin = 1;  // threshold resolution, 1..R
};

struct Breakpoint {
  double t = 0.0;  // hours since last look
  double p = 0.0;  // penalty
};

// Piecewise-linear priority penalty as a function of time since last look.
// Beyond the last breakpoint the final segment is extended linearly.
struct PenaltyCurve {
  std::vector<Breakpoint> breakpoints;
};

enum class SensorKind { ElectroOptical, InfraredDay, InfraredNight, Sar };

std::string to_string(SensorKind k);
SensorKind parse_sensor_kind(const std::string& s);

struct BudgetRow {
  double area_budget = 0.0;  // sq km
  double look_budget = 0.0;  // count
  bool operator==(const BudgetRow&) const = default;
};

struct Sensor {
  std::string id;
  SensorKind kind = SensorKind::ElectroOptical;
  std::map<int, BudgetRow> budget_rows;  // resolution -> budgets
};

// Square area and look count budgets per resolution for the standard sensor
// families (electro-optical, and the infrared/SAR family).
std::map<int, BudgetRow> standard_budget_rows(SensorKind kind);

struct ExplicitFootprint {
  std::vector<int> cells;
};

struct StripFootprint {
  Point entry;
  Point exit;
  double width = 0.0;  // km
};

using Footprint = std::variant<ExplicitFootprint, StripFootprint>;

struct Swath {
  int index = 0;     // 1..S; 0 is the reserved dummy origin
  double time = 0.0; // hours since scenario start, > 0
  std::string sensor_id;
  Footprint footprint;
};

struct Scenario {
  std::vector<GridCell> cells;                 // cells[c-1].id == c
  std::map<std::string, PenaltyCurve> curves;
  std::map<std::string, Sensor> sensors;
  std::vector<Swath> swaths;                   // swaths[s-1].index == s
  double cell_area = 2500.0;
  int R = 5;
  double never = 100000.0;
  int maxlow = 0;
  int looks_required = 1;

  int num_cells() const { return static_cast<int>(cells.size()); }
  int num_swaths() const { return static_cast<int>(swaths.size()); }
  const GridCell& cell(int c) const { return cells.at(static_cast<std::size_t>(c - 1)); }
  const Swath& swath(int s) const { return swaths.at(static_cast<std::size_t>(s - 1)); }
  const Sensor& sensor_of(int s) const;
  const PenaltyCurve& curve_of(int c) const;
};

// Fraction of a swath's unit budget consumed by one look at resolution r.
// nullopt when the factor exceeds 1 (the look can never fit in a budget).
// Throws Error if r is not listed for the sensor.
std::optional<double> cost_factor(const Sensor& sensor, int r, double cell_area);

// Cost of a look at resolution r on swath s; nullopt when r is unlisted for
// the swath's sensor or its factor is omitted.
std::optional<double> swath_cost(const Scenario& sc, int s, int r);

double eval_curve(const PenaltyCurve& curve, double dt);

// pen[c][s][g] for c in 1..C, s in 1..S, g in 0..s.
class PenaltyTable {
 public:
  PenaltyTable() = default;
  PenaltyTable(int cells, int swaths);

  int num_cells() const { return cells_; }
  int num_swaths() const { return swaths_; }

  double operator()(int c, int s, int g) const { return data_[offset(c, s, g)]; }
  double& at(int c, int s, int g) { return data_[offset(c, s, g)]; }

  bool operator==(const PenaltyTable&) const = default;

 private:
  std::size_t offset(int c, int s, int g) const;

  int cells_ = 0;
  int swaths_ = 0;
  // One triangular block per cell; swath s holds s+1 entries (g = 0..s)
  // starting at (s-1)(s+2)/2 within the block.
  std::size_t block_ = 0;
  std::vector<double> data_;
};

PenaltyTable precompute_pen(const Scenario& sc);

// All invariant violations, empty when the scenario is well formed.
std::vector<std::string> validate(const Scenario& sc);

// Throws Error listing every violation.
void require_valid(const Scenario& sc);

}  // namespace lom
