#include "lom/model.hpp"

#include <algorithm>
#include <cfenv>
#include <cmath>
#include <limits>
#include <sstream>

#include "lom/evaluate.hpp"

namespace lom {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

const char* kind_prefix(VarKind k) {
  switch (k) {
    case VarKind::X: return "X";
    case VarKind::Y: return "Y";
    case VarKind::G: return "G";
    case VarKind::Z: return "Z";
  }
  return "?";
}

}  // namespace

std::string to_string(RowTag tag) {
  switch (tag) {
    case RowTag::Eq2: return "eq2";
    case RowTag::Eq3: return "eq3";
    case RowTag::Eq4: return "eq4";
    case RowTag::Eq5: return "eq5";
    case RowTag::Eq6: return "eq6";
    case RowTag::Eq7: return "eq7";
    case RowTag::Fix8: return "fix8";
    case RowTag::Fix9: return "fix9";
    case RowTag::Fix11: return "fix11";
  }
  return "?";
}

std::string to_string(ModelMode mode) { return mode == ModelMode::Sparse ? "sparse" : "dense"; }

std::optional<int> ModelInstance::x(int c, int s, int r) const {
  if (c < 1 || c > C || s < 0 || s > S) return std::nullopt;
  const int l = layer(c, s);
  for (int j = x_begin_[static_cast<std::size_t>(l)]; j < x_begin_[static_cast<std::size_t>(l) + 1]; ++j) {
    if (columns[static_cast<std::size_t>(j)].k == r) return j;
  }
  return std::nullopt;
}

std::vector<int> ModelInstance::x_columns(int c, int s) const {
  std::vector<int> out;
  if (c < 1 || c > C || s < 0 || s > S) return out;
  const auto l = static_cast<std::size_t>(layer(c, s));
  for (int j = x_begin_[l]; j < x_begin_[l + 1]; ++j) out.push_back(j);
  return out;
}

std::optional<int> ModelInstance::y(int c, int s, int g) const {
  if (c < 1 || c > C || s < 0 || s > S || g < 0) return std::nullopt;
  const auto l = static_cast<std::size_t>(layer(c, s));
  const int j = y_begin_[l] + g;
  if (j >= y_begin_[l + 1]) return std::nullopt;
  return j;
}

std::optional<int> ModelInstance::gap(int c, int s) const {
  if (c < 1 || c > C || s < first_s_ || s > S) return std::nullopt;
  return g_begin_ + (c - 1) * (S + 1 - first_s_) + (s - first_s_);
}

std::optional<int> ModelInstance::z(int c) const {
  if (c < 1 || c > C) return std::nullopt;
  return z_begin_ + c - 1;
}

std::string ModelInstance::column_name(int j) const {
  const Column& col = columns.at(static_cast<std::size_t>(j));
  std::string name = kind_prefix(col.kind);
  name += "_" + std::to_string(col.c);
  if (col.kind == VarKind::Z) return name;
  name += "_" + std::to_string(col.s);
  if (col.kind == VarKind::G) return name;
  return name + "_" + std::to_string(col.k);
}

std::string ModelInstance::row_name(int i) const {
  const Row& row = rows.at(static_cast<std::size_t>(i));
  std::string name = to_string(row.tag);
  for (int k = 0; k < row.arity; ++k) name += "_" + std::to_string(row.idx[static_cast<std::size_t>(k)]);
  return name;
}

const std::unordered_map<std::string, int>& ModelInstance::name_index() const {
  if (names_.size() != columns.size()) {
    names_.clear();
    names_.reserve(columns.size());
    for (int j = 0; j < static_cast<int>(columns.size()); ++j) names_.emplace(column_name(j), j);
  }
  return names_;
}

ModelStats ModelInstance::stats() const {
  ModelStats st;
  st.variables = columns.size();
  st.constraints = rows.size();
  for (const Column& col : columns) {
    ++st.by_kind[col.kind];
    if (col.integer) ++st.binaries;
  }
  for (const Row& row : rows) ++st.by_tag[row.tag];
  return st;
}

ModelInstance build_model(const Scenario& sc, const PenaltyTable& pen, const CoverageSets& cov, ModelMode mode,
                          std::optional<int> gap_limit) {
  const int C = sc.num_cells();
  const int S = sc.num_swaths();
  const int R = sc.R;
  if (S < 1) throw Error("build_model: scenario has no swaths");
  if (gap_limit && *gap_limit != S) {
    throw Error("build_model: gap limit G=" + std::to_string(*gap_limit) + " unsupported; G must equal S=" +
                std::to_string(S));
  }
  if (pen.num_cells() != C || pen.num_swaths() != S) throw Error("build_model: penalty table does not match scenario");
  if (static_cast<int>(cov.covered.size()) != S) throw Error("build_model: coverage sets do not match scenario");

  ModelInstance m;
  m.mode = mode;
  m.C = C;
  m.S = S;
  m.R = R;
  m.G = S;
  m.big_m = static_cast<double>(S);
  m.looks_required = sc.looks_required;
  const bool dense = mode == ModelMode::Dense;
  m.first_s_ = dense ? 0 : 1;

  std::vector<std::optional<double>> cost(static_cast<std::size_t>((S + 1) * (R + 1)));
  auto cost_at = [&](int s, int r) -> std::optional<double>& {
    return cost[static_cast<std::size_t>(s * (R + 1) + r)];
  };
  for (int s = 1; s <= S; ++s) {
    for (int r = 1; r <= R; ++r) cost_at(s, r) = swath_cost(sc, s, r);
  }
  std::vector<char> covered(static_cast<std::size_t>((S + 1) * (C + 1)), 0);
  for (int s = 1; s <= S; ++s) {
    for (int c : cov.of(s)) covered[static_cast<std::size_t>(s * (C + 1) + c)] = 1;
  }
  auto available = [&](int c, int s, int r) {
    return s >= 1 && cost_at(s, r).has_value() && covered[static_cast<std::size_t>(s * (C + 1) + c)] != 0;
  };

  auto& cols = m.columns;
  const auto layers = static_cast<std::size_t>(C * (S + 1));
  m.x_begin_.assign(layers + 1, 0);
  m.y_begin_.assign(layers + 1, 0);

  for (int c = 1; c <= C; ++c) {
    for (int s = 0; s <= S; ++s) {
      m.x_begin_[static_cast<std::size_t>(m.layer(c, s))] = static_cast<int>(cols.size());
      if (s < m.first_s_) continue;
      for (int r = 1; r <= R; ++r) {
        if (dense || available(c, s, r)) cols.push_back({VarKind::X, c, s, r, 0.0, 1.0, true, 0.0});
      }
    }
  }
  m.x_begin_[layers] = static_cast<int>(cols.size());

  for (int c = 1; c <= C; ++c) {
    for (int s = 0; s <= S; ++s) {
      m.y_begin_[static_cast<std::size_t>(m.layer(c, s))] = static_cast<int>(cols.size());
      if (s < m.first_s_) continue;
      const int gmax = dense ? m.G : s;
      for (int g = 0; g <= gmax; ++g) {
        const double obj = (s >= 1 && g <= s) ? pen(c, s, g) : 0.0;
        cols.push_back({VarKind::Y, c, s, g, 0.0, 1.0, true, obj});
      }
    }
  }
  m.y_begin_[layers] = static_cast<int>(cols.size());

  m.g_begin_ = static_cast<int>(cols.size());
  for (int c = 1; c <= C; ++c) {
    for (int s = m.first_s_; s <= S; ++s) cols.push_back({VarKind::G, c, s, 0, 0.0, kInf, false, 0.0});
  }
  m.z_begin_ = static_cast<int>(cols.size());
  for (int c = 1; c <= C; ++c) cols.push_back({VarKind::Z, c, 0, 0, 0.0, 1.0, false, sc.never});

  auto& rows = m.rows;
  auto push = [&rows](RowTag tag, std::array<int, 3> idx, int arity, Sense sense, double rhs, std::vector<Term> terms) {
    std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) { return a.col < b.col; });
    rows.push_back({tag, idx, arity, sense, rhs, std::move(terms)});
  };

  for (int c = 1; c <= C; ++c) {
    for (int s = m.first_s_; s <= S; ++s) {
      std::vector<Term> t;
      const auto l = static_cast<std::size_t>(m.layer(c, s));
      for (int j = m.y_begin_[l]; j < m.y_begin_[l + 1]; ++j) {
        const int g = cols[static_cast<std::size_t>(j)].k;
        if (g != 0) t.push_back({j, static_cast<double>(g)});
      }
      t.push_back({*m.gap(c, s), -1.0});
      push(RowTag::Eq2, {c, s, 0}, 2, Sense::Eq, 0.0, std::move(t));
    }
  }
  for (int c = 1; c <= C; ++c) {
    for (int s = m.first_s_; s <= S; ++s) {
      std::vector<Term> t;
      const auto l = static_cast<std::size_t>(m.layer(c, s));
      for (int j = m.y_begin_[l]; j < m.y_begin_[l + 1]; ++j) t.push_back({j, 1.0});
      push(RowTag::Eq3, {c, s, 0}, 2, Sense::Eq, 1.0, std::move(t));
    }
  }
  for (int c = 1; c <= C; ++c) {
    for (int s = 1; s <= S; ++s) {
      std::vector<Term> t;
      for (int j : m.x_columns(c, s)) t.push_back({j, m.big_m});
      if (auto prev = m.gap(c, s - 1)) t.push_back({*prev, -1.0});
      t.push_back({*m.gap(c, s), 1.0});
      push(RowTag::Eq4, {c, s, 0}, 2, Sense::Ge, 1.0, std::move(t));
    }
  }
  for (int c = 1; c <= C; ++c) {
    std::vector<Term> t;
    for (int s = 0; s <= S; ++s) {
      for (int j : m.x_columns(c, s)) t.push_back({j, 1.0});
    }
    t.push_back({*m.z(c), 1.0});
    push(RowTag::Eq5, {c, 0, 0}, 1, Sense::Ge, static_cast<double>(sc.looks_required), std::move(t));
  }
  for (int s = 1; s <= S; ++s) {
    std::vector<Term> t;
    for (int c = 1; c <= C; ++c) {
      for (int j : m.x_columns(c, s)) {
        const int r = cols[static_cast<std::size_t>(j)].k;
        if (available(c, s, r)) t.push_back({j, *cost_at(s, r)});
      }
    }
    if (!t.empty()) push(RowTag::Eq6, {s, 0, 0}, 1, Sense::Le, 1.0, std::move(t));
  }
  for (int c = 1; c <= C; ++c) {
    std::vector<Term> t;
    const int rmin = sc.cell(c).rmin;
    for (int s = 0; s <= S; ++s) {
      for (int j : m.x_columns(c, s)) {
        if (cols[static_cast<std::size_t>(j)].k < rmin) t.push_back({j, 1.0});
      }
    }
    if (!t.empty()) push(RowTag::Eq7, {c, 0, 0}, 1, Sense::Le, static_cast<double>(sc.maxlow), std::move(t));
  }

  if (dense) {
    for (int c = 1; c <= C; ++c) {
      for (int s = 0; s <= S; ++s) {
        for (int r = 1; r <= R; ++r) {
          if (!available(c, s, r)) push(RowTag::Fix8, {c, s, r}, 3, Sense::Eq, 0.0, {{*m.x(c, s, r), 1.0}});
        }
      }
    }
    for (int c = 1; c <= C; ++c) {
      for (int s = 0; s <= S; ++s) {
        for (int g = s + 1; g <= m.G; ++g) push(RowTag::Fix9, {c, s, g}, 3, Sense::Eq, 0.0, {{*m.y(c, s, g), 1.0}});
      }
    }
    for (int c = 1; c <= C; ++c) push(RowTag::Fix11, {c, 0, 0}, 1, Sense::Eq, 0.0, {{*m.gap(c, 0), 1.0}});
  }
  return m;
}

Assignment Assignment::unset(const ModelInstance& m) {
  return {std::vector<double>(m.columns.size(), std::numeric_limits<double>::quiet_NaN())};
}

Assignment Assignment::zeros(const ModelInstance& m) { return {std::vector<double>(m.columns.size(), 0.0)}; }

std::vector<Violation> check_feasible(const ModelInstance& m, const Assignment& a) {
  std::vector<Violation> out;
  if (a.values.size() != m.columns.size()) {
    out.push_back({"missing", "", "assignment has " + std::to_string(a.values.size()) + " values for " +
                                      std::to_string(m.columns.size()) + " columns"});
    return out;
  }
  for (int j = 0; j < static_cast<int>(m.columns.size()); ++j) {
    const Column& col = m.columns[static_cast<std::size_t>(j)];
    const double v = a[j];
    if (std::isnan(v)) {
      out.push_back({"missing", m.column_name(j), "no value"});
      continue;
    }
    if (v < col.lb - kFeasTol || v > col.ub + kFeasTol) {
      std::ostringstream os;
      os << "value " << v << " outside [" << col.lb << ", " << col.ub << "]";
      out.push_back({"bound", m.column_name(j), os.str()});
    }
    if (col.integer && std::abs(v - std::round(v)) > kFeasTol) {
      out.push_back({"integrality", m.column_name(j), "value " + format_number(v) + " is not integral"});
    }
  }
  for (int i = 0; i < static_cast<int>(m.rows.size()); ++i) {
    const Row& row = m.rows[static_cast<std::size_t>(i)];
    double lhs = 0.0;
    bool missing = false;
    for (const Term& t : row.terms) {
      const double v = a[t.col];
      if (std::isnan(v)) missing = true;
      lhs += t.coef * v;
    }
    if (missing) continue;  // already reported per column
    bool ok = true;
    const char* op = "=";
    switch (row.sense) {
      case Sense::Le: ok = lhs <= row.rhs + kFeasTol; op = "<="; break;
      case Sense::Ge: ok = lhs >= row.rhs - kFeasTol; op = ">="; break;
      case Sense::Eq: ok = std::abs(lhs - row.rhs) <= kFeasTol; break;
    }
    if (!ok) {
      std::ostringstream os;
      os << "lhs " << lhs << " violates " << op << " " << row.rhs;
      out.push_back({to_string(row.tag), m.row_name(i), os.str()});
    }
  }
  return out;
}

Assignment warm_start(const ModelInstance& m) {
  Assignment a = Assignment::zeros(m);
  for (int j = 0; j < static_cast<int>(m.columns.size()); ++j) {
    const Column& col = m.columns[static_cast<std::size_t>(j)];
    switch (col.kind) {
      case VarKind::X: break;
      case VarKind::Y: a[j] = col.k == col.s ? 1.0 : 0.0; break;
      case VarKind::G: a[j] = static_cast<double>(col.s); break;
      case VarKind::Z: a[j] = 1.0; break;
    }
  }
  return a;
}

PenaltyTable round_penalties(const PenaltyTable& pen, int places) {
  if (places < 0) throw Error("round_penalties: places must be >= 0");
  const double scale = std::pow(10.0, places);
  const int old_mode = std::fegetround();
  std::fesetround(FE_TONEAREST);
  PenaltyTable out = pen;
  for (int c = 1; c <= pen.num_cells(); ++c) {
    for (int s = 1; s <= pen.num_swaths(); ++s) {
      for (int g = 0; g <= s; ++g) out.at(c, s, g) = std::nearbyint(pen(c, s, g) * scale) / scale;
    }
  }
  std::fesetround(old_mode);
  return out;
}

Assignment encode_plan(const ModelInstance& m, const Scenario& sc, const LookPlan& plan) {
  if (sc.num_cells() != m.C || sc.num_swaths() != m.S) throw Error("encode_plan: scenario does not match model");
  Assignment a = Assignment::zeros(m);
  const GapTable gaps = simulate_gaps(sc, plan);
  std::vector<int> looks(static_cast<std::size_t>(m.C) + 1, 0);
  for (const Look& l : plan.looks) {
    auto j = m.x(l.c, l.s, l.r);
    if (!j) {
      throw Error("encode_plan: look (" + std::to_string(l.c) + "," + std::to_string(l.s) + "," + std::to_string(l.r) +
                  ") has no X variable");
    }
    a[*j] = 1.0;
    ++looks[static_cast<std::size_t>(l.c)];
  }
  for (int c = 1; c <= m.C; ++c) {
    for (int s = 0; s <= m.S; ++s) {
      const int g = gaps[static_cast<std::size_t>(c - 1)][static_cast<std::size_t>(s)];
      if (auto jg = m.gap(c, s)) a[*jg] = static_cast<double>(g);
      if (auto jy = m.y(c, s, g)) a[*jy] = 1.0;
    }
    const int shortfall = m.looks_required - looks[static_cast<std::size_t>(c)];
    a[*m.z(c)] = static_cast<double>(std::clamp(shortfall, 0, 1));
  }
  return a;
}

InfeasibleAssignment::InfeasibleAssignment(std::vector<Violation> v)
    : Error([&v] {
        std::string msg = "infeasible assignment (" + std::to_string(v.size()) + " violations):";
        const std::size_t shown = std::min<std::size_t>(v.size(), 20);
        for (std::size_t i = 0; i < shown; ++i) msg += "\n  [" + v[i].tag + "] " + v[i].name + ": " + v[i].detail;
        if (shown < v.size()) msg += "\n  ...";
        return msg;
      }()),
      violations(std::move(v)) {}

DecodedSolution decode_solution(const ModelInstance& m, const Assignment& a) {
  auto violations = check_feasible(m, a);
  if (!violations.empty()) throw InfeasibleAssignment(std::move(violations));

  DecodedSolution out;
  for (int j = 0; j < static_cast<int>(m.columns.size()); ++j) {
    const Column& col = m.columns[static_cast<std::size_t>(j)];
    if (col.kind == VarKind::X && a[j] > 0.5) out.plan.looks.push_back({col.c, col.s, col.k});
  }
  out.plan.normalize();

  out.gaps.assign(static_cast<std::size_t>(m.C), std::vector<int>(static_cast<std::size_t>(m.S) + 1, 0));
  for (int c = 1; c <= m.C; ++c) {
    for (int s = 1; s <= m.S; ++s) {
      out.gaps[static_cast<std::size_t>(c - 1)][static_cast<std::size_t>(s)] =
          static_cast<int>(std::llround(a[*m.gap(c, s)]));
    }
  }

  // Objective (1) at the decoded point: the Y one-hot sits at g = G[c,s].
  double penalty = 0.0;
  for (int c = 1; c <= m.C; ++c) {
    for (int s = 1; s <= m.S; ++s) {
      const int g = out.gaps[static_cast<std::size_t>(c - 1)][static_cast<std::size_t>(s)];
      penalty += m.columns[static_cast<std::size_t>(*m.y(c, s, g))].obj;
    }
  }
  double z_sum = 0.0;
  for (int c = 1; c <= m.C; ++c) z_sum += a[*m.z(c)];
  const double never = m.C > 0 ? m.columns[static_cast<std::size_t>(*m.z(1))].obj : 0.0;
  out.penalty_total = penalty;
  out.never_total = never * z_sum;
  out.objective = out.penalty_total + out.never_total;
  return out;
}

}  // namespace lom
