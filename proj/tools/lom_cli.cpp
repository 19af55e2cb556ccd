// lom: generate scenarios, build and export the look optimization MILP, run
// the greedy heuristic or the exact desk-scale solver, hand the model to an
// external solver, and evaluate or compare look plans.
//
// Exit status: 0 success, 2 invalid input, 3 solver failure.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "lom/evaluate.hpp"
#include "lom/generator.hpp"
#include "lom/geometry.hpp"
#include "lom/heuristic.hpp"
#include "lom/model.hpp"
#include "lom/oracle.hpp"
#include "lom/plan.hpp"
#include "lom/scenario.hpp"
#include "lom/scenario_io.hpp"
#include "lom/solver.hpp"

namespace {

using namespace lom;

constexpr int kExitInvalid = 2;
constexpr int kExitSolver = 3;

struct Overrides {
  std::optional<int> rmin;
  std::optional<int> maxlow;
  std::optional<double> never;
  std::optional<int> looks_required;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--rmin", rmin, "Set rmin for every cell");
    cmd->add_option("--maxlow", maxlow, "Looks allowed below rmin per cell");
    cmd->add_option("--never", never, "Penalty for a cell never looked at");
    cmd->add_option("--looks-required", looks_required, "Looks wanted per cell");
  }
};

struct Loaded {
  Scenario sc;
  PenaltyTable pen;
  CoverageSets cov;
};

Loaded load(const std::string& path, const Overrides& ov, std::optional<int> round_places = std::nullopt) {
  Loaded l;
  l.sc = load_scenario(path);
  if (ov.rmin) {
    for (auto& cell : l.sc.cells) cell.rmin = *ov.rmin;
  }
  if (ov.maxlow) l.sc.maxlow = *ov.maxlow;
  if (ov.never) l.sc.never = *ov.never;
  if (ov.looks_required) l.sc.looks_required = *ov.looks_required;
  require_valid(l.sc);
  l.pen = precompute_pen(l.sc);
  if (round_places) l.pen = round_penalties(l.pen, *round_places);
  l.cov = coverage_sets(l.sc);
  return l;
}

ModelFormat parse_format(const std::string& s) {
  if (s == "mps") return ModelFormat::Mps;
  if (s == "lp") return ModelFormat::Lp;
  throw Error("unknown model format '" + s + "' (mps or lp)");
}

std::string stats_text(const ModelInstance& m) {
  const ModelStats st = m.stats();
  std::ostringstream os;
  os << "mode " << to_string(m.mode) << "  C " << m.C << "  S " << m.S << "  R " << m.R << "  G " << m.G << "\n";
  os << "variables " << st.variables << "  (binary " << st.binaries << ")\n";
  os << "constraints " << st.constraints << "\n";
  for (const auto& [tag, n] : st.by_tag) os << "  " << to_string(tag) << " " << n << "\n";
  return os.str();
}

nlohmann::json stats_json(const ModelInstance& m) {
  const ModelStats st = m.stats();
  nlohmann::json j;
  j["mode"] = to_string(m.mode);
  j["C"] = m.C;
  j["S"] = m.S;
  j["R"] = m.R;
  j["G"] = m.G;
  j["variables"] = st.variables;
  j["binaries"] = st.binaries;
  j["constraints"] = st.constraints;
  for (const auto& [tag, n] : st.by_tag) j["rows"][to_string(tag)] = n;
  return j;
}

void print_summary(const EvalReport& r) {
  std::printf("coverage %.1f%%  looks %d  objective %s\n", 100.0 * r.coverage_pct, r.total.total_looks,
              format_number(r.objective).c_str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Look optimization model toolkit"};
  app.require_subcommand(1);

  // gen
  std::string gen_spec, gen_out;
  std::optional<std::uint64_t> gen_seed;
  auto* gen = app.add_subcommand("gen", "Generate a synthetic scenario from a spec");
  gen->add_option("--spec", gen_spec, "Generator spec (JSON)")->required()->check(CLI::ExistingFile);
  gen->add_option("--out", gen_out, "Scenario file to write")->required();
  gen->add_option("--seed", gen_seed, "Override the spec's seed");

  // build
  std::string build_scenario, build_out, build_format = "mps", build_warm, build_stats;
  bool build_dense = false;
  std::optional<int> build_round;
  Overrides build_ov;
  auto* build = app.add_subcommand("build", "Build the MILP and export it");
  build->add_option("--scenario", build_scenario)->required()->check(CLI::ExistingFile);
  build->add_option("--out", build_out, "Model file to write");
  build->add_option("--format", build_format, "mps or lp");
  build->add_flag("--dense", build_dense, "Materialize full index ranges with fixing rows");
  build->add_option("--round-places", build_round, "Round penalties to this many decimals");
  build->add_option("--warm-start", build_warm, "Also write the no-look warm start here");
  build->add_option("--stats", build_stats, "Write model size counts as JSON");
  build_ov.add_to(build);

  // heuristic
  std::string heur_scenario, heur_out;
  int heur_r = 0;
  Overrides heur_ov;
  auto* heur = app.add_subcommand("heuristic", "Greedy allocation at a fixed resolution");
  heur->add_option("--scenario", heur_scenario)->required()->check(CLI::ExistingFile);
  heur->add_option("--resolution,-r", heur_r, "Resolution used for every look")->required();
  heur->add_option("--out", heur_out, "Plan file to write")->required();
  heur_ov.add_to(heur);

  // exact
  std::string exact_scenario, exact_out;
  SearchLimits limits;
  Overrides exact_ov;
  auto* exact = app.add_subcommand("exact", "Exact solution of a desk-scale instance");
  exact->add_option("--scenario", exact_scenario)->required()->check(CLI::ExistingFile);
  exact->add_option("--out", exact_out, "Plan file to write")->required();
  exact->add_option("--max-cells", limits.max_cells);
  exact->add_option("--max-swaths", limits.max_swaths);
  exact->add_option("--max-resolutions", limits.max_resolutions);
  exact->add_option("--max-nodes", limits.max_nodes);
  exact_ov.add_to(exact);

  // solve
  std::string solve_scenario, solve_out, solve_work = "lom-solve", solve_format = "mps", solve_report;
  std::optional<std::string> solve_cmd;
  std::optional<int> solve_round;
  bool solve_dense = false, solve_no_ws = false;
  SolverConfig solve_cfg;
  Overrides solve_ov;
  auto* solve = app.add_subcommand("solve", "Solve the MILP with an external solver");
  solve->add_option("--scenario", solve_scenario)->required()->check(CLI::ExistingFile);
  solve->add_option("--out", solve_out, "Plan file to write")->required();
  solve->add_option("--work-dir", solve_work, "Directory for model, warm start and solution files");
  solve->add_option("--solver-cmd", solve_cmd, "Command template (default: $LOM_SOLVER_CMD, then the bundled adapter)");
  solve->add_option("--solver-options", solve_cfg.options, "Passed through to the solver verbatim");
  solve->add_option("--gap", solve_cfg.gap, "Relative optimality tolerance")->check(CLI::Range(0.0, 1.0));
  solve->add_option("--time-limit", solve_cfg.time_limit, "Seconds, 0 for none")->check(CLI::NonNegativeNumber);
  solve->add_option("--format", solve_format, "mps or lp");
  solve->add_option("--round-places", solve_round, "Round penalties to this many decimals");
  solve->add_flag("--no-warm-start", solve_no_ws, "Do not hand the no-look solution to the solver");
  solve->add_flag("--dense", solve_dense);
  solve->add_option("--report", solve_report, "Write the evaluation report as JSON");
  solve_ov.add_to(solve);

  // eval
  std::string eval_scenario, eval_plan, eval_report, eval_traj;
  Overrides eval_ov;
  auto* eval = app.add_subcommand("eval", "Evaluate a look plan");
  eval->add_option("--scenario", eval_scenario)->required()->check(CLI::ExistingFile);
  eval->add_option("--plan", eval_plan)->required()->check(CLI::ExistingFile);
  eval->add_option("--report", eval_report, "Write the report as JSON");
  eval->add_option("--trajectory", eval_traj, "Write per-swath penalties for plotting");
  eval_ov.add_to(eval);

  // compare
  std::string cmp_scenario, cmp_a, cmp_b, cmp_label_a = "A", cmp_label_b = "B", cmp_json, cmp_csv;
  Overrides cmp_ov;
  auto* cmp = app.add_subcommand("compare", "Compare two look plans on one scenario");
  cmp->add_option("--scenario", cmp_scenario)->required()->check(CLI::ExistingFile);
  cmp->add_option("--plan-a", cmp_a)->required()->check(CLI::ExistingFile);
  cmp->add_option("--plan-b", cmp_b)->required()->check(CLI::ExistingFile);
  cmp->add_option("--label-a", cmp_label_a);
  cmp->add_option("--label-b", cmp_label_b);
  cmp->add_option("--json", cmp_json, "Write the comparison as JSON");
  cmp->add_option("--csv", cmp_csv, "Append a CSV row (header written for a new file)");
  cmp_ov.add_to(cmp);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInvalid;
  }

  try {
    if (*gen) {
      GenSpec spec = load_genspec(gen_spec);
      if (gen_seed) spec.seed = *gen_seed;
      const Scenario sc = generate(spec);
      save_scenario(sc, gen_out);
      std::printf("cells %d  swaths %d  fingerprint %s\n", sc.num_cells(), sc.num_swaths(),
                  scenario_fingerprint(sc).c_str());
    } else if (*build) {
      const Loaded l = load(build_scenario, build_ov, build_round);
      const ModelInstance m = build_model(l.sc, l.pen, l.cov, build_dense ? ModelMode::Dense : ModelMode::Sparse);
      const ModelFormat fmt = parse_format(build_format);
      if (!build_out.empty()) export_model(m, fmt, build_out);
      if (!build_warm.empty()) export_warm_start(m, warm_start(m), build_warm);
      if (!build_stats.empty()) write_text_file(build_stats, stats_json(m).dump(1) + "\n");
      std::cout << stats_text(m);
    } else if (*heur) {
      const Loaded l = load(heur_scenario, heur_ov);
      const LookPlan plan = greedy_plan(l.sc, l.cov, heur_r);
      save_plan(plan, heur_out);
      print_summary(coverage_report(l.sc, l.pen, l.cov, plan));
    } else if (*exact) {
      const Loaded l = load(exact_scenario, exact_ov);
      const ExactResult res = solve_exact(l.sc, l.pen, l.cov, limits);
      save_plan(res.plan, exact_out);
      print_summary(coverage_report(l.sc, l.pen, l.cov, res.plan));
      std::printf("nodes %lld\n", static_cast<long long>(res.nodes));
    } else if (*solve) {
      const Loaded l = load(solve_scenario, solve_ov, solve_round);
      const ModelInstance m = build_model(l.sc, l.pen, l.cov, solve_dense ? ModelMode::Dense : ModelMode::Sparse);
      solve_cfg.command_template = resolve_solver_command(solve_cmd);
      solve_cfg.format = parse_format(solve_format);
      solve_cfg.warm_start = !solve_no_ws;
      DecodedSolution decoded;
      try {
        const SolverRun run = run_external_solver(m, solve_cfg, solve_work);
        decoded = decode_solution(m, run.solution);
      } catch (const InfeasibleAssignment& e) {
        throw SolverFailure(std::string("solver returned an infeasible point: ") + e.what());
      }
      save_plan(decoded.plan, solve_out);
      const EvalReport rep = coverage_report(l.sc, l.pen, l.cov, decoded.plan);
      if (!solve_report.empty()) write_text_file(solve_report, report_to_json(rep).dump(1) + "\n");
      print_summary(rep);
    } else if (*eval) {
      const Loaded l = load(eval_scenario, eval_ov);
      const LookPlan plan = load_plan(eval_plan);
      const EvalReport rep = coverage_report(l.sc, l.pen, l.cov, plan);
      if (!eval_report.empty()) write_text_file(eval_report, report_to_json(rep).dump(1) + "\n");
      if (!eval_traj.empty()) {
        LookPlan in_range;
        for (const Look& look : plan.looks) {
          if (look.c >= 1 && look.c <= l.sc.num_cells() && look.s >= 1 && look.s <= l.sc.num_swaths()) {
            in_range.looks.push_back(look);
          }
        }
        write_text_file(eval_traj, penalty_trajectory_data(l.sc, l.pen, in_range));
      }
      std::cout << format_report_table(rep);
    } else if (*cmp) {
      const Loaded l = load(cmp_scenario, cmp_ov);
      const EvalReport a = coverage_report(l.sc, l.pen, l.cov, load_plan(cmp_a));
      const EvalReport b = coverage_report(l.sc, l.pen, l.cov, load_plan(cmp_b));
      const Comparison c = compare(a, b, cmp_label_a, cmp_label_b);
      if (!cmp_json.empty()) write_text_file(cmp_json, comparison_to_json(c).dump(1) + "\n");
      if (!cmp_csv.empty()) {
        std::string text;
        if (std::filesystem::exists(cmp_csv)) text = read_text_file(cmp_csv);
        else text = comparison_csv_header() + "\n";
        write_text_file(cmp_csv, text + comparison_csv_row(cmp_scenario, c) + "\n");
      }
      std::cout << format_comparison_table(c);
    }
  } catch (const SolverFailure& e) {
    std::fprintf(stderr, "lom: %s\n", e.what());
    return kExitSolver;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "lom: %s\n", e.what());
    return kExitInvalid;
  }
  return 0;
}
