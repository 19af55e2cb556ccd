#pragma once

// JSON scenario files. Top-level keys: cells, curves, sensors, swaths, params.
// Times in hours, distances in km, areas in sq km.

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "lom/scenario.hpp"

namespace lom {

nlohmann::json scenario_to_json(const Scenario& sc);
Scenario scenario_from_json(const nlohmann::json& j);

Scenario load_scenario(const std::filesystem::path& path);
void save_scenario(const Scenario& sc, const std::filesystem::path& path);

// 64-bit FNV-1a over the canonical JSON dump; identifies a scenario in reports.
std::string scenario_fingerprint(const Scenario& sc);

// Shared file helpers.
nlohmann::json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace lom
