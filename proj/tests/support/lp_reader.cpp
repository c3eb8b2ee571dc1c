#include "lp_reader.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <limits>
#include <optional>
#include <tuple>
#include <sstream>

namespace lecopt::testing {

namespace {

enum class Section { None, Objective, Constraints, Bounds, Binaries, Generals, End };

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

bool is_number(const std::string& tok, double& value) {
  const std::string l = lower(tok);
  if (l == "inf" || l == "+inf" || l == "infinity" || l == "+infinity") {
    value = std::numeric_limits<double>::infinity();
    return true;
  }
  if (l == "-inf" || l == "-infinity") {
    value = -std::numeric_limits<double>::infinity();
    return true;
  }
  char* end = nullptr;
  value = std::strtod(tok.c_str(), &end);
  return end != tok.c_str() && *end == '\0';
}

bool is_sense(const std::string& tok) {
  return tok == "<=" || tok == ">=" || tok == "=" || tok == "=<" || tok == "=>" || tok == "<" ||
         tok == ">";
}

std::string canonical_sense(const std::string& tok) {
  if (tok == "<=" || tok == "=<" || tok == "<") return "<=";
  if (tok == ">=" || tok == "=>" || tok == ">") return ">=";
  return "=";
}

// Splits on whitespace and separates operators glued to names.
std::vector<std::string> tokenize(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  auto flush = [&] {
    if (!cur.empty()) out.push_back(cur);
    cur.clear();
  };
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      flush();
    } else if (c == '<' || c == '>' || c == '=') {
      flush();
      std::string op(1, c);
      if (i + 1 < line.size() && (line[i + 1] == '=' || line[i + 1] == '<' || line[i + 1] == '>')) {
        op += line[++i];
      }
      out.push_back(op);
    } else if ((c == '+' || c == '-') && cur.empty()) {
      // Sign of a number or a standalone operator.
      const bool next_digit = i + 1 < line.size() &&
                              (std::isdigit(static_cast<unsigned char>(line[i + 1])) || line[i + 1] == '.');
      if (next_digit) {
        cur += c;
      } else if (i + 3 < line.size() + 1 && lower(line.substr(i + 1, 3)) == "inf") {
        cur += c;
      } else {
        out.push_back(std::string(1, c));
      }
    } else {
      cur += c;
    }
  }
  flush();
  return out;
}

// Linear expression "[name:] [+|-] [coef] var ..." with an optional trailing
// constant (objective only).
struct Expression {
  std::map<std::string, double> terms;
  double constant = 0.0;
};

Expression parse_expression(const std::vector<std::string>& toks, std::vector<std::string>& order) {
  Expression e;
  double sign = 1.0;
  std::optional<double> coef;
  for (const auto& tok : toks) {
    double v = 0.0;
    if (tok == "+") {
      continue;
    } else if (tok == "-") {
      sign = -sign;
    } else if (is_number(tok, v)) {
      if (coef) {
        e.constant += sign * *coef;
        sign = 1.0;
      }
      coef = v;
    } else {
      const double c = sign * coef.value_or(1.0);
      if (e.terms.find(tok) == e.terms.end() &&
          std::find(order.begin(), order.end(), tok) == order.end()) {
        order.push_back(tok);
      }
      e.terms[tok] += c;
      sign = 1.0;
      coef.reset();
    }
  }
  if (coef) e.constant += sign * *coef;
  return e;
}

void note_column(std::vector<std::string>& order, const std::string& name) {
  if (std::find(order.begin(), order.end(), name) == order.end()) order.push_back(name);
}

}  // namespace

LpText parse_lp_text(const std::string& text) {
  LpText lp;
  Section section = Section::None;
  std::vector<std::string> pending;  // tokens of the statement being built
  std::istringstream in(text);
  std::string line;

  auto finish_objective = [&] {
    if (pending.empty()) return;
    std::vector<std::string> toks = pending;
    if (!toks.empty() && toks.front().back() == ':') toks.erase(toks.begin());
    const Expression e = parse_expression(toks, lp.columns);
    lp.objective = e.terms;
    lp.objective_constant = e.constant;
    pending.clear();
  };

  auto try_finish_row = [&]() {
    // A row is complete once it holds a sense followed by a right-hand side.
    auto it = std::find_if(pending.begin(), pending.end(), is_sense);
    if (it == pending.end() || it + 1 == pending.end()) return;
    LpRow row;
    std::vector<std::string> lhs(pending.begin(), it);
    if (!lhs.empty() && lhs.front().back() == ':') {
      row.name = lhs.front().substr(0, lhs.front().size() - 1);
      lhs.erase(lhs.begin());
    } else {
      row.name = "R" + std::to_string(lp.rows.size() + 1);
    }
    row.sense = canonical_sense(*it);
    std::vector<std::string> rhs_toks(it + 1, pending.end());
    double sign = 1.0, value = 0.0;
    bool have = false;
    for (const auto& tok : rhs_toks) {
      if (tok == "-") {
        sign = -sign;
      } else if (tok != "+" && is_number(tok, value)) {
        have = true;
      } else if (tok != "+") {
        throw LpParseError("unexpected token '" + tok + "' on right-hand side of " + row.name);
      }
    }
    if (!have) return;
    const Expression e = parse_expression(lhs, lp.columns);
    row.coefficients = e.terms;
    row.rhs = sign * value - e.constant;
    lp.rows.push_back(std::move(row));
    pending.clear();
  };

  auto parse_bound = [&](const std::vector<std::string>& toks) {
    double v = 0.0;
    if (toks.size() == 2 && lower(toks[1]) == "free") {
      lp.bounds[toks[0]] = {-std::numeric_limits<double>::infinity(),
                            std::numeric_limits<double>::infinity()};
      note_column(lp.columns, toks[0]);
      return;
    }
    auto current = [&](const std::string& name) -> std::pair<double, double>& {
      note_column(lp.columns, name);
      auto it = lp.bounds.find(name);
      if (it == lp.bounds.end()) {
        it = lp.bounds.emplace(name, std::make_pair(0.0, std::numeric_limits<double>::infinity()))
                 .first;
      }
      return it->second;
    };
    if (toks.size() == 5 && is_number(toks[0], v) && is_sense(toks[1]) && is_sense(toks[3])) {
      double hi = 0.0;
      if (!is_number(toks[4], hi)) throw LpParseError("bad bound on " + toks[2]);
      auto& b = current(toks[2]);
      b = {v, hi};
      return;
    }
    if (toks.size() == 3 && is_sense(toks[1])) {
      const std::string s = canonical_sense(toks[1]);
      if (is_number(toks[2], v)) {  // x op v
        auto& b = current(toks[0]);
        if (s == "<=") b.second = v;
        if (s == ">=") b.first = v;
        if (s == "=") b = {v, v};
        return;
      }
      if (is_number(toks[0], v)) {  // v op x
        auto& b = current(toks[2]);
        if (s == "<=") b.first = v;
        if (s == ">=") b.second = v;
        if (s == "=") b = {v, v};
        return;
      }
    }
    std::string joined;
    for (const auto& t : toks) joined += t + " ";
    throw LpParseError("cannot parse bound: " + joined);
  };

  while (std::getline(in, line)) {
    if (const auto pos = line.find('\\'); pos != std::string::npos) {
      lp.comments.push_back(line.substr(pos + 1));
      line = line.substr(0, pos);
    }
    const auto toks = tokenize(line);
    if (toks.empty()) continue;
    const std::string head = lower(toks[0]);
    const std::string head2 = toks.size() > 1 ? lower(toks[1]) : "";
    Section next = section;
    std::size_t consumed = 0;
    if (head == "minimize" || head == "minimum" || head == "min") {
      next = Section::Objective, consumed = 1;
    } else if (head == "maximize" || head == "maximum" || head == "max") {
      next = Section::Objective, consumed = 1, lp.minimize = false;
    } else if ((head == "subject" && head2 == "to") || (head == "such" && head2 == "that")) {
      next = Section::Constraints, consumed = 2;
    } else if (head == "st" || head == "s.t." || head == "st.") {
      next = Section::Constraints, consumed = 1;
    } else if (head == "bounds" || head == "bound") {
      next = Section::Bounds, consumed = 1;
    } else if (head == "binaries" || head == "binary" || head == "bin") {
      next = Section::Binaries, consumed = 1;
    } else if (head == "generals" || head == "general" || head == "gen") {
      next = Section::Generals, consumed = 1;
    } else if (head == "end") {
      next = Section::End, consumed = 1;
    }
    if (next != section) {
      if (section == Section::Objective) finish_objective();
      if (section == Section::Constraints && !pending.empty()) {
        throw LpParseError("incomplete constraint before section change");
      }
      section = next;
    }
    std::vector<std::string> rest(toks.begin() + static_cast<long>(consumed), toks.end());
    if (rest.empty()) continue;
    switch (section) {
      case Section::Objective:
        pending.insert(pending.end(), rest.begin(), rest.end());
        break;
      case Section::Constraints:
        pending.insert(pending.end(), rest.begin(), rest.end());
        try_finish_row();
        break;
      case Section::Bounds:
        parse_bound(rest);
        break;
      case Section::Binaries:
        for (const auto& name : rest) {
          lp.binaries.insert(name);
          note_column(lp.columns, name);
        }
        break;
      case Section::Generals:
        throw LpParseError("general integers are not supported");
      case Section::None:
        throw LpParseError("content before the objective section");
      case Section::End:
        throw LpParseError("content after End");
    }
  }
  if (section != Section::End) throw LpParseError("missing End");
  return lp;
}

MilpProblem to_problem(const LpText& lp) {
  MilpProblem out;
  const double sign = lp.minimize ? 1.0 : -1.0;
  for (const auto& name : lp.columns) {
    const bool binary = lp.binaries.count(name) > 0;
    double lo = 0.0, hi = binary ? 1.0 : std::numeric_limits<double>::infinity();
    if (auto it = lp.bounds.find(name); it != lp.bounds.end()) std::tie(lo, hi) = it->second;
    double cost = 0.0;
    if (auto it = lp.objective.find(name); it != lp.objective.end()) cost = sign * it->second;
    const std::size_t j = binary ? out.add_binary(name, cost) : out.add_column(name, lo, hi, cost);
    out.set_bounds(j, lo, hi);
  }
  out.set_objective_constant(sign * lp.objective_constant);
  for (const auto& row : lp.rows) {
    std::vector<Term> terms;
    for (const auto& [name, coef] : row.coefficients) {
      terms.push_back({out.find_column(name), coef});
    }
    std::sort(terms.begin(), terms.end(),
              [](const Term& a, const Term& b) { return a.column < b.column; });
    const RowSense sense = row.sense == "<=" ? RowSense::LessEqual
                           : row.sense == ">=" ? RowSense::GreaterEqual
                                               : RowSense::Equal;
    out.add_row(row.name, std::move(terms), sense, row.rhs);
  }
  return out;
}

}  // namespace lecopt::testing
