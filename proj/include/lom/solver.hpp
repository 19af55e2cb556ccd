#pragma once

// Hand-off to an external MILP solver through files and a shell command.
// The command template may use {model}, {warmstart}, {solution}, {gap},
// {timelimit} and {options}; each is replaced before the command runs. The
// solver must leave a solution file in any format read_solution_file accepts.

#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include "lom/model.hpp"

namespace lom {

struct SolverFailure : Error {
  using Error::Error;
};

struct SolverConfig {
  std::string command_template;
  std::string options;     // passed through verbatim, e.g. node selection flags
  double gap = 0.05;       // relative optimality tolerance
  double time_limit = 0.0; // seconds, 0 = none
  bool warm_start = true;
  ModelFormat format = ModelFormat::Mps;
};

// The bundled adapter script, run with python3.
std::string default_solver_command();

// Explicit template, else $LOM_SOLVER_CMD, else the default.
std::string resolve_solver_command(const std::optional<std::string>& explicit_template);

std::string shell_quote(const std::string& s);

// Unknown placeholders are left untouched.
std::string substitute_placeholders(const std::string& tmpl, const std::map<std::string, std::string>& values);

struct SolverRun {
  std::string command;
  Assignment solution;
};

// Writes model (and warm start) into workdir, runs the command and reads the
// solution back. Throws SolverFailure on a non-zero exit or missing output.
SolverRun run_external_solver(const ModelInstance& m, const SolverConfig& cfg, const std::filesystem::path& workdir);

}  // namespace lom
