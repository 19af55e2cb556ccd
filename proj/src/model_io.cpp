#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

#include "lom/model.hpp"
#include "lom/scenario_io.hpp"

namespace lom {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string pad(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream is(line);
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  return s;
}

double parse_number(const std::string& tok) {
  const std::string t = lower(tok);
  if (t == "inf" || t == "+inf" || t == "infinity" || t == "+infinity") return kInf;
  if (t == "-inf" || t == "-infinity") return -kInf;
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(tok, &used);
  } catch (const std::exception&) {
    throw Error("not a number: '" + tok + "'");
  }
  if (used != tok.size()) throw Error("not a number: '" + tok + "'");
  return v;
}

bool looks_numeric(const std::string& tok) {
  if (tok.empty()) return false;
  const char ch = tok[0];
  return std::isdigit(static_cast<unsigned char>(ch)) || ch == '.' ||
         ((ch == '-' || ch == '+') && tok.size() > 1 &&
          (std::isdigit(static_cast<unsigned char>(tok[1])) || tok[1] == '.'));
}

std::vector<std::vector<std::pair<int, double>>> column_entries(const ModelInstance& m) {
  std::vector<std::vector<std::pair<int, double>>> entries(m.columns.size());
  for (int i = 0; i < static_cast<int>(m.rows.size()); ++i) {
    for (const Term& t : m.rows[static_cast<std::size_t>(i)].terms) {
      entries[static_cast<std::size_t>(t.col)].emplace_back(i, t.coef);
    }
  }
  return entries;
}

std::string model_banner(const ModelInstance& m) {
  return "LOM model mode=" + to_string(m.mode) + " C=" + std::to_string(m.C) + " S=" + std::to_string(m.S) +
         " R=" + std::to_string(m.R) + " G=" + std::to_string(m.G);
}

int intern_column(ParsedModel& pm, const std::string& name) {
  auto [it, inserted] = pm.column_index.try_emplace(name, static_cast<int>(pm.columns.size()));
  if (inserted) pm.columns.push_back({name, 0.0, kInf, false, 0.0});
  return it->second;
}

}  // namespace

std::string format_number(double v) {
  if (v == kInf) return "inf";
  if (v == -kInf) return "-inf";
  if (v == 0.0) return "0";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general);
  return std::string(buf, res.ptr);
}

// ---- MPS -----------------------------------------------------------------

void write_mps(const ModelInstance& m, std::ostream& out) {
  out << "* " << model_banner(m) << "\n";
  out << "NAME          LOM\n";
  out << "ROWS\n";
  out << " N  OBJ\n";
  for (int i = 0; i < static_cast<int>(m.rows.size()); ++i) {
    const char* type = "E";
    switch (m.rows[static_cast<std::size_t>(i)].sense) {
      case Sense::Le: type = "L"; break;
      case Sense::Ge: type = "G"; break;
      case Sense::Eq: type = "E"; break;
    }
    out << ' ' << type << "  " << m.row_name(i) << "\n";
  }

  out << "COLUMNS\n";
  const auto entries = column_entries(m);
  bool in_int = false;
  for (int j = 0; j < static_cast<int>(m.columns.size()); ++j) {
    const Column& col = m.columns[static_cast<std::size_t>(j)];
    if (col.integer != in_int) {
      out << "    MARKER                 'MARKER'                 " << (col.integer ? "'INTORG'" : "'INTEND'") << "\n";
      in_int = col.integer;
    }
    const std::string name = pad(m.column_name(j), 8);
    bool wrote = false;
    if (col.obj != 0.0) {
      out << "    " << name << "  " << pad("OBJ", 8) << "  " << format_number(col.obj) << "\n";
      wrote = true;
    }
    for (const auto& [row, coef] : entries[static_cast<std::size_t>(j)]) {
      out << "    " << name << "  " << pad(m.row_name(row), 8) << "  " << format_number(coef) << "\n";
      wrote = true;
    }
    if (!wrote) out << "    " << name << "  " << pad("OBJ", 8) << "  0\n";
  }
  if (in_int) out << "    MARKER                 'MARKER'                 'INTEND'\n";

  out << "RHS\n";
  for (int i = 0; i < static_cast<int>(m.rows.size()); ++i) {
    const double rhs = m.rows[static_cast<std::size_t>(i)].rhs;
    if (rhs != 0.0) out << "    RHS       " << pad(m.row_name(i), 8) << "  " << format_number(rhs) << "\n";
  }

  out << "BOUNDS\n";
  for (int j = 0; j < static_cast<int>(m.columns.size()); ++j) {
    const Column& col = m.columns[static_cast<std::size_t>(j)];
    const std::string name = pad(m.column_name(j), 8);
    if (col.lb == col.ub) {
      out << " FX BND       " << name << "  " << format_number(col.lb) << "\n";
      continue;
    }
    if (col.lb != 0.0) out << " LO BND       " << name << "  " << format_number(col.lb) << "\n";
    if (col.ub != kInf) out << " UP BND       " << name << "  " << format_number(col.ub) << "\n";
  }
  out << "ENDATA\n";
}

ParsedModel read_mps(std::istream& in) {
  ParsedModel pm;
  std::unordered_map<std::string, int> row_index;
  std::string objective_row;
  std::string section;
  bool integer_block = false;
  std::string line;
  int lineno = 0;
  auto fail = [&lineno](const std::string& msg) { throw Error("MPS line " + std::to_string(lineno) + ": " + msg); };

  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '*') continue;
    const auto tok = split_ws(line);
    if (tok.empty()) continue;
    if (!std::isspace(static_cast<unsigned char>(line[0]))) {
      section = tok[0];
      if (section == "ENDATA") break;
      continue;
    }
    if (section == "ROWS") {
      if (tok.size() != 2) fail("expected '<type> <name>'");
      if (tok[0] == "N") {
        if (objective_row.empty()) objective_row = tok[1];
        continue;
      }
      Sense sense = Sense::Eq;
      if (tok[0] == "L") sense = Sense::Le;
      else if (tok[0] == "G") sense = Sense::Ge;
      else if (tok[0] != "E") fail("unknown row type " + tok[0]);
      row_index.emplace(tok[1], static_cast<int>(pm.rows.size()));
      pm.rows.push_back({tok[1], sense, 0.0, {}});
    } else if (section == "COLUMNS") {
      if (tok.size() >= 3 && tok[1] == "'MARKER'") {
        if (tok[2] == "'INTORG'") integer_block = true;
        else if (tok[2] == "'INTEND'") integer_block = false;
        continue;
      }
      if (tok.size() != 3 && tok.size() != 5) fail("expected '<col> <row> <value> [<row> <value>]'");
      const int j = intern_column(pm, tok[0]);
      if (integer_block) pm.columns[static_cast<std::size_t>(j)].integer = true;
      for (std::size_t k = 1; k + 1 < tok.size(); k += 2) {
        const double v = parse_number(tok[k + 1]);
        if (tok[k] == objective_row) {
          pm.columns[static_cast<std::size_t>(j)].obj = v;
          continue;
        }
        auto it = row_index.find(tok[k]);
        if (it == row_index.end()) fail("unknown row " + tok[k]);
        if (v != 0.0) pm.rows[static_cast<std::size_t>(it->second)].terms.push_back({j, v});
      }
    } else if (section == "RHS") {
      const std::size_t start = tok.size() % 2 == 0 ? 0 : 1;
      for (std::size_t k = start; k + 1 < tok.size(); k += 2) {
        if (tok[k] == objective_row) continue;
        auto it = row_index.find(tok[k]);
        if (it == row_index.end()) fail("unknown row " + tok[k]);
        pm.rows[static_cast<std::size_t>(it->second)].rhs = parse_number(tok[k + 1]);
      }
    } else if (section == "BOUNDS") {
      if (tok.size() < 3) fail("short BOUNDS line");
      auto it = pm.column_index.find(tok[2]);
      if (it == pm.column_index.end()) fail("bound on unknown column " + tok[2]);
      ParsedColumn& col = pm.columns[static_cast<std::size_t>(it->second)];
      const std::string& type = tok[0];
      const double v = tok.size() > 3 ? parse_number(tok[3]) : 0.0;
      if (type == "UP") col.ub = v;
      else if (type == "LO") col.lb = v;
      else if (type == "FX") col.lb = col.ub = v;
      else if (type == "MI") col.lb = -kInf;
      else if (type == "PL") col.ub = kInf;
      else if (type == "FR") { col.lb = -kInf; col.ub = kInf; }
      else if (type == "BV") { col.lb = 0.0; col.ub = 1.0; col.integer = true; }
      else if (type == "LI") { col.lb = v; col.integer = true; }
      else if (type == "UI") { col.ub = v; col.integer = true; }
      else fail("unknown bound type " + type);
    } else if (section == "RANGES") {
      fail("RANGES section not supported");
    }
  }
  return pm;
}

// ---- LP ------------------------------------------------------------------

namespace {

void write_linear(std::ostream& out, const ModelInstance& m, const std::vector<Term>& terms) {
  int on_line = 0;
  for (const Term& t : terms) {
    if (on_line == 8) {
      out << "\n   ";
      on_line = 0;
    }
    out << (t.coef < 0 ? " - " : " + ");
    const double mag = std::abs(t.coef);
    if (mag != 1.0) out << format_number(mag) << ' ';
    out << m.column_name(t.col);
    ++on_line;
  }
}

}  // namespace

void write_lp(const ModelInstance& m, std::ostream& out) {
  out << "\\ " << model_banner(m) << "\n";
  out << "Minimize\n obj:";
  std::vector<Term> obj;
  for (int j = 0; j < static_cast<int>(m.columns.size()); ++j) {
    const double c = m.columns[static_cast<std::size_t>(j)].obj;
    if (c != 0.0) obj.push_back({j, c});
  }
  if (obj.empty() && !m.columns.empty()) obj.push_back({0, 0.0});
  write_linear(out, m, obj);
  out << "\nSubject To\n";
  for (int i = 0; i < static_cast<int>(m.rows.size()); ++i) {
    const Row& row = m.rows[static_cast<std::size_t>(i)];
    out << ' ' << m.row_name(i) << ':';
    write_linear(out, m, row.terms);
    const char* op = row.sense == Sense::Le ? "<=" : row.sense == Sense::Ge ? ">=" : "=";
    out << ' ' << op << ' ' << format_number(row.rhs) << "\n";
  }
  out << "Bounds\n";
  for (int j = 0; j < static_cast<int>(m.columns.size()); ++j) {
    const Column& col = m.columns[static_cast<std::size_t>(j)];
    if (col.integer && col.lb == 0.0 && col.ub == 1.0) continue;
    if (col.lb == 0.0 && col.ub == kInf) continue;
    const std::string name = m.column_name(j);
    if (col.lb == col.ub) {
      out << ' ' << name << " = " << format_number(col.lb) << "\n";
    } else if (col.ub == kInf) {
      out << ' ' << name << " >= " << format_number(col.lb) << "\n";
    } else {
      out << ' ' << format_number(col.lb) << " <= " << name << " <= " << format_number(col.ub) << "\n";
    }
  }
  out << "Binaries\n";
  for (int j = 0; j < static_cast<int>(m.columns.size()); ++j) {
    const Column& col = m.columns[static_cast<std::size_t>(j)];
    if (col.integer && col.lb == 0.0 && col.ub == 1.0) out << ' ' << m.column_name(j) << "\n";
  }
  bool has_general = false;
  for (const Column& col : m.columns) has_general = has_general || (col.integer && !(col.lb == 0.0 && col.ub == 1.0));
  if (has_general) {
    out << "Generals\n";
    for (int j = 0; j < static_cast<int>(m.columns.size()); ++j) {
      const Column& col = m.columns[static_cast<std::size_t>(j)];
      if (col.integer && !(col.lb == 0.0 && col.ub == 1.0)) out << ' ' << m.column_name(j) << "\n";
    }
  }
  out << "End\n";
}

namespace {

enum class LpSection { None, Objective, Constraints, Bounds, Binaries, Generals, End };

LpSection lp_section_of(const std::string& line) {
  const std::string l = lower(line);
  if (l == "minimize" || l == "minimum" || l == "min" || l == "maximize" || l == "maximum" || l == "max") {
    return LpSection::Objective;
  }
  if (l == "subject to" || l == "such that" || l == "st" || l == "s.t.") return LpSection::Constraints;
  if (l == "bounds" || l == "bound") return LpSection::Bounds;
  if (l == "binaries" || l == "binary" || l == "bin") return LpSection::Binaries;
  if (l == "generals" || l == "general" || l == "gen" || l == "integers") return LpSection::Generals;
  if (l == "end") return LpSection::End;
  return LpSection::None;
}

bool is_operator(const std::string& t) {
  return t == "<=" || t == ">=" || t == "=" || t == "<" || t == ">" || t == "=<" || t == "=>";
}

Sense sense_of(const std::string& t) {
  if (t == "<=" || t == "<" || t == "=<") return Sense::Le;
  if (t == ">=" || t == ">" || t == "=>") return Sense::Ge;
  return Sense::Eq;
}

// Consumes `[+|-] [coef] name` terms from tok[pos..] until an operator or the end.
std::vector<Term> parse_terms(ParsedModel& pm, const std::vector<std::string>& tok, std::size_t& pos) {
  std::vector<Term> terms;
  double sign = 1.0;
  double coef = 1.0;
  while (pos < tok.size() && !is_operator(tok[pos])) {
    const std::string& t = tok[pos++];
    if (t == "+") continue;
    if (t == "-") {
      sign = -sign;
      continue;
    }
    if (looks_numeric(t)) {
      coef = parse_number(t);
      continue;
    }
    const int j = intern_column(pm, t);
    terms.push_back({j, sign * coef});
    sign = 1.0;
    coef = 1.0;
  }
  return terms;
}

}  // namespace

ParsedModel read_lp(std::istream& in) {
  ParsedModel pm;
  LpSection section = LpSection::None;
  std::vector<std::string> objective_tokens;
  std::vector<std::string> constraint_tokens;
  std::vector<std::vector<std::string>> bound_lines;
  std::vector<std::string> binaries;
  std::vector<std::string> generals;

  std::string line;
  while (std::getline(in, line)) {
    if (auto bs = line.find('\\'); bs != std::string::npos) line.erase(bs);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto tok = split_ws(line);
    if (tok.empty()) continue;
    std::string joined;
    for (const auto& t : tok) joined += (joined.empty() ? "" : " ") + t;
    if (auto sec = lp_section_of(joined); sec != LpSection::None) {
      section = sec;
      if (section == LpSection::End) break;
      continue;
    }
    switch (section) {
      case LpSection::Objective: objective_tokens.insert(objective_tokens.end(), tok.begin(), tok.end()); break;
      case LpSection::Constraints: constraint_tokens.insert(constraint_tokens.end(), tok.begin(), tok.end()); break;
      case LpSection::Bounds: bound_lines.push_back(tok); break;
      case LpSection::Binaries: binaries.insert(binaries.end(), tok.begin(), tok.end()); break;
      case LpSection::Generals: generals.insert(generals.end(), tok.begin(), tok.end()); break;
      default: throw Error("LP: content outside any section: " + line);
    }
  }

  std::size_t pos = 0;
  if (!objective_tokens.empty() && objective_tokens[0].back() == ':') pos = 1;
  for (const Term& t : parse_terms(pm, objective_tokens, pos)) pm.columns[static_cast<std::size_t>(t.col)].obj += t.coef;

  pos = 0;
  int unnamed = 0;
  while (pos < constraint_tokens.size()) {
    ParsedRow row;
    if (constraint_tokens[pos].back() == ':') {
      row.name = constraint_tokens[pos].substr(0, constraint_tokens[pos].size() - 1);
      ++pos;
    } else {
      row.name = "R" + std::to_string(++unnamed);
    }
    row.terms = parse_terms(pm, constraint_tokens, pos);
    if (pos + 1 >= constraint_tokens.size()) throw Error("LP: constraint " + row.name + " lacks operator or rhs");
    row.sense = sense_of(constraint_tokens[pos]);
    row.rhs = parse_number(constraint_tokens[pos + 1]);
    pos += 2;
    pm.rows.push_back(std::move(row));
  }

  for (const auto& b : bound_lines) {
    auto col_of = [&](const std::string& name) -> ParsedColumn& {
      return pm.columns[static_cast<std::size_t>(intern_column(pm, name))];
    };
    if (b.size() == 2 && lower(b[1]) == "free") {
      auto& col = col_of(b[0]);
      col.lb = -kInf;
      col.ub = kInf;
    } else if (b.size() == 5 && is_operator(b[1]) && is_operator(b[3])) {
      auto& col = col_of(b[2]);
      col.lb = parse_number(b[0]);
      col.ub = parse_number(b[4]);
    } else if (b.size() == 3 && is_operator(b[1])) {
      const bool name_first = !looks_numeric(b[0]) && lower(b[0]).find("inf") == std::string::npos;
      auto& col = col_of(name_first ? b[0] : b[2]);
      const double v = parse_number(name_first ? b[2] : b[0]);
      Sense s = sense_of(b[1]);
      if (!name_first && s != Sense::Eq) s = s == Sense::Le ? Sense::Ge : Sense::Le;
      if (s == Sense::Eq) col.lb = col.ub = v;
      else if (s == Sense::Le) col.ub = v;
      else col.lb = v;
    } else {
      throw Error("LP: unsupported bound line");
    }
  }
  for (const auto& name : binaries) {
    auto& col = pm.columns[static_cast<std::size_t>(intern_column(pm, name))];
    col.integer = true;
    col.lb = std::max(col.lb, 0.0);
    col.ub = std::min(col.ub, 1.0);
  }
  for (const auto& name : generals) pm.columns[static_cast<std::size_t>(intern_column(pm, name))].integer = true;
  return pm;
}

ParsedModel read_model_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  const std::string ext = lower(path.extension().string());
  if (ext == ".lp") return read_lp(in);
  return read_mps(in);
}

void export_model(const ModelInstance& m, ModelFormat format, const std::filesystem::path& path) {
  std::ostringstream os;
  if (format == ModelFormat::Mps) write_mps(m, os);
  else write_lp(m, os);
  write_text_file(path, os.str());
}

// ---- assignments ---------------------------------------------------------

void write_assignment(const ModelInstance& m, const Assignment& a, std::ostream& out) {
  if (a.values.size() != m.columns.size()) throw Error("assignment size does not match model");
  for (int j = 0; j < static_cast<int>(m.columns.size()); ++j) {
    if (std::isnan(a[j])) throw Error("assignment has no value for variable " + m.column_name(j));
  }
  for (int j = 0; j < static_cast<int>(m.columns.size()); ++j) {
    out << m.column_name(j) << ' ' << format_number(a[j]) << "\n";
  }
}

void export_warm_start(const ModelInstance& m, const Assignment& a, const std::filesystem::path& path) {
  std::ostringstream os;
  write_assignment(m, a, os);
  write_text_file(path, os.str());
}

Assignment read_assignment(const ModelInstance& m, std::istream& in, bool missing_as_zero) {
  Assignment a = missing_as_zero ? Assignment::zeros(m) : Assignment::unset(m);
  const auto& index = m.name_index();
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto tok = split_ws(line);
    if (tok.empty() || tok[0][0] == '#') continue;
    if (tok.size() != 2) throw Error("assignment line " + std::to_string(lineno) + ": expected '<name> <value>'");
    auto it = index.find(tok[0]);
    if (it == index.end()) throw Error("assignment line " + std::to_string(lineno) + ": unknown variable " + tok[0]);
    a[it->second] = parse_number(tok[1]);
  }
  return a;
}

Assignment read_solution_file(const ModelInstance& m, const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  std::istringstream is(text);
  std::string first;
  while (std::getline(is, first) && split_ws(first).empty()) {}
  const auto head = split_ws(first);
  const auto& index = m.name_index();

  // CBC: status line, then `index name value reduced_cost` rows.
  static const std::vector<std::string> cbc_status = {"Optimal", "Stopped", "Integer", "Infeasible", "Unbounded"};
  if (!head.empty() && std::find(cbc_status.begin(), cbc_status.end(), head[0]) != cbc_status.end()) {
    if (head[0] == "Infeasible" || head[0] == "Unbounded") throw Error("solver reported: " + first);
    Assignment a = Assignment::zeros(m);
    std::string line;
    while (std::getline(is, line)) {
      auto tok = split_ws(line);
      if (!tok.empty() && tok[0] == "**") tok.erase(tok.begin());
      if (tok.size() < 3) continue;
      auto it = index.find(tok[1]);
      if (it == index.end()) continue;  // row activities share the format
      a[it->second] = parse_number(tok[2]);
    }
    return a;
  }

  // HiGHS raw solution: `# Columns N` followed by `name value` rows.
  if (const auto pos = text.find("# Columns"); pos != std::string::npos) {
    Assignment a = Assignment::zeros(m);
    std::istringstream body(text.substr(pos));
    std::string line;
    std::getline(body, line);
    while (std::getline(body, line)) {
      const auto tok = split_ws(line);
      if (tok.empty()) continue;
      if (tok[0][0] == '#') break;
      if (tok.size() < 2) continue;
      auto it = index.find(tok[0]);
      if (it == index.end()) throw Error("solution references unknown variable " + tok[0]);
      a[it->second] = parse_number(tok[1]);
    }
    return a;
  }

  std::istringstream all(text);
  return read_assignment(m, all, true);
}

}  // namespace lom
