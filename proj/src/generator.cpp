#include "lom/generator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <limits>
#include <random>

#include "lom/scenario_io.hpp"

namespace lom {

namespace {

// mt19937_64 output is fixed by the standard; the distributions are not, so
// draws are derived from raw bits to keep files identical across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  // [0, 1)
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  // [0, n)
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t x = eng_();
    while (x >= limit) x = eng_();
    return x % n;
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[static_cast<std::size_t>(below(i))]);
  }

 private:
  std::mt19937_64 eng_;
};

PenaltyCurve curve_from_json(const nlohmann::json& j) {
  PenaltyCurve curve;
  for (const auto& bp : j) curve.breakpoints.push_back({bp.at(0).get<double>(), bp.at(1).get<double>()});
  return curve;
}

nlohmann::json curve_to_json(const PenaltyCurve& curve) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& bp : curve.breakpoints) j.push_back({bp.t, bp.p});
  return j;
}

std::vector<SensorKind> sensors_from_json(const nlohmann::json& j) {
  std::vector<SensorKind> out;
  for (const auto& k : j) out.push_back(parse_sensor_kind(k.get<std::string>()));
  return out;
}

}  // namespace

PenaltyCurve default_high_curve() { return {{{0, 0}, {10, 0.1}, {20, 0.42}, {30, 1.0}}}; }

PenaltyCurve default_low_curve() { return {{{0, 0}, {20, 0.01}, {37, 0.05}, {48, 0.4}}}; }

GenSpec genspec_from_json(const nlohmann::json& j) {
  GenSpec spec;
  spec.high_curve = default_high_curve();
  spec.low_curve = default_low_curve();
  try {
    spec.seed = j.value("seed", spec.seed);
    const auto& g = j.at("grid");
    spec.grid.rows = g.at("rows").get<int>();
    spec.grid.cols = g.at("cols").get<int>();
    spec.grid.cell_km = g.value("cell_km", spec.grid.cell_km);
    spec.n_high = j.at("n_high").get<int>();
    spec.n_low = j.at("n_low").get<int>();
    spec.horizon_hours = j.value("horizon_hours", spec.horizon_hours);
    spec.swath_width_km = j.value("swath_width_km", spec.swath_width_km);
    if (j.contains("satellites")) {
      for (const auto& js : j.at("satellites")) {
        SatelliteSpec sat;
        sat.name = js.at("name").get<std::string>();
        sat.sensors = sensors_from_json(js.at("sensors"));
        sat.passes_per_day = js.value("passes_per_day", sat.passes_per_day);
        if (js.contains("first_pass_hours")) sat.first_pass_hours = js.at("first_pass_hours").get<double>();
        spec.satellites.push_back(std::move(sat));
      }
    } else {
      const int n = j.at("n_satellites").get<int>();
      const auto kinds = sensors_from_json(j.at("sensors"));
      const double ppd = j.value("passes_per_day", 4.0);
      for (int i = 1; i <= n; ++i) spec.satellites.push_back({"sat" + std::to_string(i), kinds, ppd, std::nullopt});
    }
    if (j.contains("curves")) {
      const auto& jc = j.at("curves");
      if (jc.contains("high")) spec.high_curve = curve_from_json(jc.at("high"));
      if (jc.contains("low")) spec.low_curve = curve_from_json(jc.at("low"));
    }
    spec.R = j.value("R", spec.R);
    spec.rmin = j.value("rmin", spec.rmin);
    spec.never = j.value("never", spec.never);
    spec.maxlow = j.value("maxlow", spec.maxlow);
    spec.looks_required = j.value("looks_required", spec.looks_required);
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed generator spec: ") + e.what());
  }
  return spec;
}

nlohmann::json genspec_to_json(const GenSpec& spec) {
  nlohmann::json j;
  j["seed"] = spec.seed;
  j["grid"] = {{"rows", spec.grid.rows}, {"cols", spec.grid.cols}, {"cell_km", spec.grid.cell_km}};
  j["n_high"] = spec.n_high;
  j["n_low"] = spec.n_low;
  j["horizon_hours"] = spec.horizon_hours;
  j["swath_width_km"] = spec.swath_width_km;
  j["satellites"] = nlohmann::json::array();
  for (const auto& sat : spec.satellites) {
    nlohmann::json js;
    js["name"] = sat.name;
    js["sensors"] = nlohmann::json::array();
    for (SensorKind k : sat.sensors) js["sensors"].push_back(to_string(k));
    js["passes_per_day"] = sat.passes_per_day;
    if (sat.first_pass_hours) js["first_pass_hours"] = *sat.first_pass_hours;
    j["satellites"].push_back(js);
  }
  j["curves"] = {{"high", curve_to_json(spec.high_curve)}, {"low", curve_to_json(spec.low_curve)}};
  j["R"] = spec.R;
  j["rmin"] = spec.rmin;
  j["never"] = spec.never;
  j["maxlow"] = spec.maxlow;
  j["looks_required"] = spec.looks_required;
  return j;
}

GenSpec load_genspec(const std::filesystem::path& path) { return genspec_from_json(read_json_file(path)); }

Scenario generate(const GenSpec& spec) {
  const GridSpec& grid = spec.grid;
  if (grid.rows <= 0 || grid.cols <= 0 || !(grid.cell_km > 0.0)) throw Error("grid needs positive rows, cols and cell_km");
  if (spec.n_high < 0 || spec.n_low < 0 || spec.n_high + spec.n_low < 1) throw Error("need at least one cell");
  if (static_cast<long long>(spec.n_high) + spec.n_low > static_cast<long long>(grid.rows) * grid.cols) {
    throw Error("n_high + n_low exceeds the " + std::to_string(grid.rows * grid.cols) + " grid positions");
  }
  if (!(spec.horizon_hours > 0.0)) throw Error("horizon_hours must be positive");
  if (!(spec.swath_width_km > 0.0)) throw Error("swath_width_km must be positive");
  if (spec.satellites.empty()) throw Error("no satellites");
  for (const auto& sat : spec.satellites) {
    if (sat.sensors.empty()) throw Error("satellite '" + sat.name + "' has no sensors");
    if (!(sat.passes_per_day > 0.0)) throw Error("satellite '" + sat.name + "' needs passes_per_day > 0");
  }

  Rng rng(spec.seed);
  Scenario sc;
  sc.cell_area = grid.cell_km * grid.cell_km;
  sc.R = spec.R;
  sc.never = spec.never;
  sc.maxlow = spec.maxlow;
  sc.looks_required = spec.looks_required;
  sc.curves["high"] = spec.high_curve;
  sc.curves["low"] = spec.low_curve;

  std::vector<std::pair<int, int>> positions;
  for (int r = 0; r < grid.rows; ++r) {
    for (int c = 0; c < grid.cols; ++c) positions.emplace_back(r, c);
  }
  rng.shuffle(positions);
  const int n = spec.n_high + spec.n_low;
  positions.resize(static_cast<std::size_t>(n));
  std::sort(positions.begin(), positions.end());

  std::vector<int> order(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
  rng.shuffle(order);
  std::vector<char> is_high(static_cast<std::size_t>(n), 0);
  for (int i = 0; i < spec.n_high; ++i) is_high[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])] = 1;

  for (int i = 0; i < n; ++i) {
    const auto [row, col] = positions[static_cast<std::size_t>(i)];
    GridCell cell;
    cell.id = i + 1;
    cell.row = row;
    cell.col = col;
    cell.center = {(col + 0.5) * grid.cell_km, (grid.rows - row - 0.5) * grid.cell_km};
    cell.priority_class = is_high[static_cast<std::size_t>(i)] ? PriorityClass::High : PriorityClass::Low;
    cell.curve_id = is_high[static_cast<std::size_t>(i)] ? "high" : "low";
    cell.rmin = spec.rmin;
    sc.cells.push_back(cell);
  }

  const double width = grid.cols * grid.cell_km;
  const double height = grid.rows * grid.cell_km;
  const double half_len = std::hypot(width, height);
  struct Pending {
    double time;
    std::size_t sat;
    std::size_t sensor;
    Swath swath;
  };
  std::vector<Pending> pending;
  for (std::size_t i = 0; i < spec.satellites.size(); ++i) {
    const SatelliteSpec& sat = spec.satellites[i];
    std::vector<std::string> sensor_ids;
    for (SensorKind kind : sat.sensors) {
      std::string id = sat.name + "_" + to_string(kind);
      if (sc.sensors.count(id)) throw Error("satellite '" + sat.name + "' lists sensor " + to_string(kind) + " twice");
      sc.sensors[id] = Sensor{id, kind, standard_budget_rows(kind)};
      sensor_ids.push_back(id);
    }
    const double period = 24.0 / sat.passes_per_day;
    const double phase = sat.first_pass_hours ? *sat.first_pass_hours : period * (1.0 - rng.uniform());
    if (!(phase > 0.0)) throw Error("satellite '" + sat.name + "' first pass must be after time 0");
    for (int k = 0;; ++k) {
      const double t = phase + k * period;
      if (t > spec.horizon_hours) break;
      const Point through{rng.uniform() * width, rng.uniform() * height};
      const double heading = rng.uniform() * std::numbers::pi;
      const Point dir{std::cos(heading), std::sin(heading)};
      const StripFootprint strip{{through.x - half_len * dir.x, through.y - half_len * dir.y},
                                 {through.x + half_len * dir.x, through.y + half_len * dir.y},
                                 spec.swath_width_km};
      for (std::size_t j = 0; j < sensor_ids.size(); ++j) pending.push_back({t, i, j, Swath{0, t, sensor_ids[j], strip}});
    }
  }
  if (pending.empty()) throw Error("no satellite pass falls within the horizon");
  std::stable_sort(pending.begin(), pending.end(), [](const Pending& a, const Pending& b) {
    return std::tie(a.time, a.sat, a.sensor) < std::tie(b.time, b.sat, b.sensor);
  });
  for (std::size_t i = 0; i < pending.size(); ++i) {
    pending[i].swath.index = static_cast<int>(i) + 1;
    sc.swaths.push_back(std::move(pending[i].swath));
  }

  require_valid(sc);
  return sc;
}

}  // namespace lom
