#include "lom/scenario_io.hpp"

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace lom {

using nlohmann::json;

namespace {

json point_to_json(const Point& p) { return json::array({p.x, p.y}); }

Point point_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2) throw Error("point must be a [x, y] array");
  return {j.at(0).get<double>(), j.at(1).get<double>()};
}

json footprint_to_json(const Footprint& fp) {
  if (const auto* ex = std::get_if<ExplicitFootprint>(&fp)) {
    return {{"type", "explicit"}, {"cells", ex->cells}};
  }
  const auto& st = std::get<StripFootprint>(fp);
  return {{"type", "strip"}, {"entry", point_to_json(st.entry)}, {"exit", point_to_json(st.exit)}, {"width", st.width}};
}

Footprint footprint_from_json(const json& j) {
  const auto type = j.at("type").get<std::string>();
  if (type == "explicit") return ExplicitFootprint{j.at("cells").get<std::vector<int>>()};
  if (type == "strip") {
    return StripFootprint{point_from_json(j.at("entry")), point_from_json(j.at("exit")), j.at("width").get<double>()};
  }
  throw Error("unknown footprint type: " + type);
}

}  // namespace

json scenario_to_json(const Scenario& sc) {
  json cells = json::array();
  for (const auto& c : sc.cells) {
    cells.push_back({{"id", c.id},
                     {"row", c.row},
                     {"col", c.col},
                     {"center", point_to_json(c.center)},
                     {"priority_class", to_string(c.priority_class)},
                     {"curve_id", c.curve_id},
                     {"rmin", c.rmin}});
  }
  json curves = json::object();
  for (const auto& [id, curve] : sc.curves) {
    json bps = json::array();
    for (const auto& b : curve.breakpoints) bps.push_back(json::array({b.t, b.p}));
    curves[id] = {{"breakpoints", bps}};
  }
  json sensors = json::object();
  for (const auto& [id, s] : sc.sensors) {
    json rows = json::object();
    for (const auto& [r, row] : s.budget_rows) {
      rows[std::to_string(r)] = {{"area_budget", row.area_budget}, {"look_budget", row.look_budget}};
    }
    sensors[id] = {{"id", s.id}, {"kind", to_string(s.kind)}, {"budget_rows", rows}};
  }
  json swaths = json::array();
  for (const auto& sw : sc.swaths) {
    swaths.push_back({{"index", sw.index}, {"time", sw.time}, {"sensor_id", sw.sensor_id},
                      {"footprint", footprint_to_json(sw.footprint)}});
  }
  json params = {{"cell_area", sc.cell_area},
                 {"R", sc.R},
                 {"never", sc.never},
                 {"maxlow", sc.maxlow},
                 {"looks_required", sc.looks_required}};
  return {{"cells", cells}, {"curves", curves}, {"sensors", sensors}, {"swaths", swaths}, {"params", params}};
}

Scenario scenario_from_json(const json& j) {
  Scenario sc;
  try {
    for (const auto& jc : j.at("cells")) {
      GridCell c;
      c.id = jc.at("id").get<int>();
      c.row = jc.at("row").get<int>();
      c.col = jc.at("col").get<int>();
      c.center = point_from_json(jc.at("center"));
      c.priority_class = parse_priority_class(jc.at("priority_class").get<std::string>());
      c.curve_id = jc.at("curve_id").get<std::string>();
      c.rmin = jc.at("rmin").get<int>();
      sc.cells.push_back(std::move(c));
    }
    for (const auto& [id, jcurve] : j.at("curves").items()) {
      PenaltyCurve curve;
      for (const auto& bp : jcurve.at("breakpoints")) {
        curve.breakpoints.push_back({bp.at(0).get<double>(), bp.at(1).get<double>()});
      }
      sc.curves.emplace(id, std::move(curve));
    }
    for (const auto& [id, js] : j.at("sensors").items()) {
      Sensor s;
      s.id = js.value("id", id);
      s.kind = parse_sensor_kind(js.at("kind").get<std::string>());
      for (const auto& [r, jr] : js.at("budget_rows").items()) {
        s.budget_rows[std::stoi(r)] = {jr.at("area_budget").get<double>(), jr.at("look_budget").get<double>()};
      }
      sc.sensors.emplace(id, std::move(s));
    }
    for (const auto& jsw : j.at("swaths")) {
      Swath sw;
      sw.index = jsw.at("index").get<int>();
      sw.time = jsw.at("time").get<double>();
      sw.sensor_id = jsw.at("sensor_id").get<std::string>();
      sw.footprint = footprint_from_json(jsw.at("footprint"));
      sc.swaths.push_back(std::move(sw));
    }
    const auto& p = j.at("params");
    sc.cell_area = p.at("cell_area").get<double>();
    sc.R = p.at("R").get<int>();
    sc.never = p.at("never").get<double>();
    sc.maxlow = p.value("maxlow", 0);
    sc.looks_required = p.value("looks_required", 1);
  } catch (const json::exception& e) {
    throw Error(std::string("malformed scenario JSON: ") + e.what());
  }
  return sc;
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  if (!out) throw Error("write failed: " + path.string());
}

Scenario load_scenario(const std::filesystem::path& path) { return scenario_from_json(read_json_file(path)); }

void save_scenario(const Scenario& sc, const std::filesystem::path& path) {
  write_text_file(path, scenario_to_json(sc).dump(1) + "\n");
}

std::string scenario_fingerprint(const Scenario& sc) {
  const std::string text = scenario_to_json(sc).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

}  // namespace lom
