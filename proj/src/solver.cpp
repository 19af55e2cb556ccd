#include "lom/solver.hpp"

#include <cstdlib>
#include <sys/wait.h>

namespace lom {

std::string default_solver_command() {
  return "python3 " + shell_quote(LOM_SOLVER_SCRIPT) +
         " {model} --solution {solution} --warmstart={warmstart} --gap {gap} --time-limit {timelimit} {options}";
}

std::string resolve_solver_command(const std::optional<std::string>& explicit_template) {
  if (explicit_template && !explicit_template->empty()) return *explicit_template;
  if (const char* env = std::getenv("LOM_SOLVER_CMD"); env && *env) return env;
  return default_solver_command();
}

std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (char ch : s) {
    if (ch == '\'') out += "'\\''";
    else out += ch;
  }
  return out + "'";
}

std::string substitute_placeholders(const std::string& tmpl, const std::map<std::string, std::string>& values) {
  std::string out;
  for (std::size_t i = 0; i < tmpl.size();) {
    if (tmpl[i] == '{') {
      const auto close = tmpl.find('}', i);
      if (close != std::string::npos) {
        auto it = values.find(tmpl.substr(i + 1, close - i - 1));
        if (it != values.end()) {
          out += it->second;
          i = close + 1;
          continue;
        }
      }
    }
    out += tmpl[i++];
  }
  return out;
}

SolverRun run_external_solver(const ModelInstance& m, const SolverConfig& cfg, const std::filesystem::path& workdir) {
  std::filesystem::create_directories(workdir);
  const auto model_path = workdir / (cfg.format == ModelFormat::Mps ? "model.mps" : "model.lp");
  const auto warm_path = workdir / "warmstart.txt";
  const auto solution_path = workdir / "solution.txt";
  export_model(m, cfg.format, model_path);
  if (cfg.warm_start) export_warm_start(m, warm_start(m), warm_path);
  std::filesystem::remove(solution_path);

  SolverRun run;
  run.command = substitute_placeholders(cfg.command_template,
                                        {{"model", shell_quote(model_path.string())},
                                         {"warmstart", cfg.warm_start ? shell_quote(warm_path.string()) : ""},
                                         {"solution", shell_quote(solution_path.string())},
                                         {"gap", format_number(cfg.gap)},
                                         {"timelimit", format_number(cfg.time_limit)},
                                         {"options", cfg.options}});
  const int status = std::system(run.command.c_str());
  if (status == -1) throw SolverFailure("could not start solver: " + run.command);
  if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) {
    const int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    throw SolverFailure("solver command failed (exit " + std::to_string(code) + "): " + run.command);
  }
  if (!std::filesystem::exists(solution_path)) {
    throw SolverFailure("solver produced no solution file: " + run.command);
  }
  try {
    run.solution = read_solution_file(m, solution_path);
  } catch (const Error& e) {
    throw SolverFailure(std::string("unreadable solver output: ") + e.what());
  }
  return run;
}

}  // namespace lom
