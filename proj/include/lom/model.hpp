#pragma once

// Solver-agnostic construction of the look optimization MILP.
//
//   minimize   sum pen[c][s][g] * Y[c,s,g] + never * sum Z[c]
//   eq2   sum_g g * Y[c,s,g] - G[c,s]                    = 0      all c, s
//   eq3   sum_g Y[c,s,g]                                 = 1      all c, s
//   eq4   G[c,s] - G[c,s-1] + bigM * sum_r X[c,s,r]      >= 1     all c, s >= 1
//   eq5   sum_{s,r} X[c,s,r] + Z[c]                      >= looks_required
//   eq6   sum_{c,r} cost[s,r] * X[c,s,r]                 <= 1     s >= 1
//   eq7   sum_{s, r < rmin_c} X[c,s,r]                   <= maxlow
//   fix8  X[c,s,r] = 0 for s = 0 (and, in dense mode, for unavailable looks)
//   fix9  Y[c,s,g] = 0 for s < g
//   fix11 G[c,0] = 0
//   G >= 0 continuous, 0 <= Z <= 1, X and Y binary, bigM = S.
//
// Sparse mode drops every variable the fixing rows would pin to zero (and the
// s = 0 layer), so it emits no fix rows. Dense mode materializes the full
// index ranges; it exists to size models the way a dense formulation would.
//
// Rows with no terms (eq6 for a swath with no affordable look, eq7 for a cell
// with no low-resolution look) are not emitted.

#include <array>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "lom/geometry.hpp"
#include "lom/plan.hpp"
#include "lom/scenario.hpp"

namespace lom {

enum class ModelMode { Sparse, Dense };
enum class VarKind { X, Y, G, Z };
enum class RowTag { Eq2, Eq3, Eq4, Eq5, Eq6, Eq7, Fix8, Fix9, Fix11 };
enum class Sense { Le, Ge, Eq };

std::string to_string(RowTag tag);
std::string to_string(ModelMode mode);

struct Column {
  VarKind kind = VarKind::X;
  int c = 0;
  int s = 0;
  int k = 0;  // r for X, g for Y, unused otherwise
  double lb = 0.0;
  double ub = 1.0;  // +inf for G
  bool integer = false;
  double obj = 0.0;
};

struct Term {
  int col = 0;
  double coef = 0.0;
};

struct Row {
  RowTag tag = RowTag::Eq2;
  std::array<int, 3> idx{};  // (c, s, k) as applicable
  int arity = 0;             // how many of idx are meaningful
  Sense sense = Sense::Eq;
  double rhs = 0.0;
  std::vector<Term> terms;
};

struct ModelStats {
  std::size_t variables = 0;
  std::size_t constraints = 0;
  std::size_t binaries = 0;
  std::map<VarKind, std::size_t> by_kind;
  std::map<RowTag, std::size_t> by_tag;
};

class ModelInstance {
 public:
  ModelMode mode = ModelMode::Sparse;
  int C = 0;
  int S = 0;
  int R = 0;
  int G = 0;
  double big_m = 0.0;
  int looks_required = 1;
  std::vector<Column> columns;  // ordered X, Y, G, Z, each by index tuple
  std::vector<Row> rows;        // ordered by tag, then index tuple

  std::optional<int> x(int c, int s, int r) const;
  std::optional<int> y(int c, int s, int g) const;
  std::optional<int> gap(int c, int s) const;
  std::optional<int> z(int c) const;

  // Columns X[c,s,*] in ascending r.
  std::vector<int> x_columns(int c, int s) const;

  std::string column_name(int j) const;
  std::string row_name(int i) const;
  // Name -> column index; built on first use.
  const std::unordered_map<std::string, int>& name_index() const;

  ModelStats stats() const;

 private:
  friend ModelInstance build_model(const Scenario&, const PenaltyTable&, const CoverageSets&, ModelMode,
                                   std::optional<int>);
  int layer(int c, int s) const { return (c - 1) * (S + 1) + s; }

  int first_s_ = 1;                 // 0 in dense mode
  std::vector<int> x_begin_;        // size C*(S+1)+1, prefix offsets into columns
  std::vector<int> y_begin_;
  int g_begin_ = 0;
  int z_begin_ = 0;
  mutable std::unordered_map<std::string, int> names_;
};

// gap_limit defaults to S; any other value is rejected.
ModelInstance build_model(const Scenario& sc, const PenaltyTable& pen, const CoverageSets& cov,
                          ModelMode mode = ModelMode::Sparse, std::optional<int> gap_limit = std::nullopt);

// Values aligned with model.columns. NaN marks an unset value.
struct Assignment {
  std::vector<double> values;

  static Assignment unset(const ModelInstance& m);
  static Assignment zeros(const ModelInstance& m);
  double operator[](int j) const { return values[static_cast<std::size_t>(j)]; }
  double& operator[](int j) { return values[static_cast<std::size_t>(j)]; }
};

inline constexpr double kFeasTol = 1e-6;

struct Violation {
  std::string tag;   // row tag ("eq3", ...) or "bound" / "integrality" / "missing"
  std::string name;  // row or column name
  std::string detail;
};

std::vector<Violation> check_feasible(const ModelInstance& m, const Assignment& a);

// The no-look assignment: Z = 1, G[c,s] = s, X = 0, Y[c,s,g] = [g == s].
// Feasible whenever looks_required == 1.
Assignment warm_start(const ModelInstance& m);

// Rounds every entry half-to-even at `places` decimals.
PenaltyTable round_penalties(const PenaltyTable& pen, int places = 6);

// Builds the assignment that realizes a plan: X from the looks, G/Y from the
// simulated gaps, Z = clamp(looks_required - looks, 0, 1).
Assignment encode_plan(const ModelInstance& m, const Scenario& sc, const LookPlan& plan);

struct DecodedSolution {
  LookPlan plan;
  std::vector<std::vector<int>> gaps;  // gaps[c-1][s], s = 0..S
  double penalty_total = 0.0;
  double never_total = 0.0;
  double objective = 0.0;
};

// Throws InfeasibleAssignment when check_feasible reports anything.
DecodedSolution decode_solution(const ModelInstance& m, const Assignment& a);

struct InfeasibleAssignment : Error {
  std::vector<Violation> violations;
  explicit InfeasibleAssignment(std::vector<Violation> v);
};

// ---- file formats --------------------------------------------------------

enum class ModelFormat { Mps, Lp };

void write_mps(const ModelInstance& m, std::ostream& out);
void write_lp(const ModelInstance& m, std::ostream& out);
void export_model(const ModelInstance& m, ModelFormat format, const std::filesystem::path& path);

// Model parsed back from a file, for round-trip checks and independent solving.
struct ParsedColumn {
  std::string name;
  double lb = 0.0;
  double ub = 0.0;
  bool integer = false;
  double obj = 0.0;
};

struct ParsedRow {
  std::string name;
  Sense sense = Sense::Eq;
  double rhs = 0.0;
  std::vector<Term> terms;
};

struct ParsedModel {
  std::vector<ParsedColumn> columns;
  std::vector<ParsedRow> rows;
  std::unordered_map<std::string, int> column_index;
};

ParsedModel read_mps(std::istream& in);
ParsedModel read_lp(std::istream& in);
ParsedModel read_model_file(const std::filesystem::path& path);

// `name value` per line, every column in model order. Throws if any value is unset.
void write_assignment(const ModelInstance& m, const Assignment& a, std::ostream& out);
void export_warm_start(const ModelInstance& m, const Assignment& a, const std::filesystem::path& path);

// Reads `name value` lines. Unknown names throw; names absent from the file
// become 0 when missing_as_zero, otherwise stay unset.
Assignment read_assignment(const ModelInstance& m, std::istream& in, bool missing_as_zero = true);

// Accepts `name value` files as well as CBC and HiGHS native solution files.
Assignment read_solution_file(const ModelInstance& m, const std::filesystem::path& path);

std::string format_number(double v);

}  // namespace lom
