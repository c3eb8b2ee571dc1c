#include <charconv>
#include <cmath>
#include <string>

#include "lecopt/model.hpp"

namespace lecopt {

namespace {

constexpr std::size_t kTermsPerLine = 6;

std::string number(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, ptr);
}

// " + 2 x", " - 0.5 y"; the first term of an expression keeps a bare minus.
void append_term(std::string& out, double coefficient, const std::string& name, bool first) {
  if (first) {
    if (coefficient < 0) out += " -";
  } else {
    out += coefficient < 0 ? " -" : " +";
  }
  out += " " + number(std::abs(coefficient)) + " " + name;
}

void append_expression(std::string& out, const std::vector<Term>& terms,
                       const std::vector<Column>& columns) {
  std::size_t written = 0;
  for (const auto& term : terms) {
    if (term.coefficient == 0.0) continue;
    if (written > 0 && written % kTermsPerLine == 0) out += "\n   ";
    append_term(out, term.coefficient, columns[term.column].name, written == 0);
    ++written;
  }
  if (written == 0) out += " 0 " + (columns.empty() ? std::string("x") : columns.front().name);
}

}  // namespace

std::string export_lp_text(const MilpProblem& problem) {
  problem.check_well_formed();
  const auto& columns = problem.columns();
  std::string out;
  out += "\\ scenario: " + problem.label() + "\n";
  out += "\\ columns: " + std::to_string(columns.size()) + ", rows: " +
         std::to_string(problem.num_rows()) + ", binaries: " +
         std::to_string(problem.num_binaries()) + "\n";
  out += "Minimize\n obj:";

  std::vector<Term> objective;
  for (std::size_t j = 0; j < columns.size(); ++j) {
    if (columns[j].cost != 0.0) objective.push_back({j, columns[j].cost});
  }
  if (objective.empty() && problem.objective_constant() == 0.0) {
    out += " 0 " + (columns.empty() ? std::string("x") : columns.front().name);
  } else {
    if (!objective.empty()) append_expression(out, objective, columns);
    if (problem.objective_constant() != 0.0) {
      const double c = problem.objective_constant();
      out += objective.empty() ? (c < 0 ? " - " : " ") : (c < 0 ? " - " : " + ");
      out += number(std::abs(c));
    }
  }
  out += "\nSubject To\n";
  for (const auto& row : problem.rows()) {
    out += " " + row.name + ":";
    append_expression(out, row.terms, columns);
    switch (row.sense) {
      case RowSense::LessEqual: out += " <= "; break;
      case RowSense::Equal: out += " = "; break;
      case RowSense::GreaterEqual: out += " >= "; break;
    }
    out += number(row.rhs) + "\n";
  }
  out += "Bounds\n";
  for (const auto& col : columns) {
    if (col.binary) {
      if (col.lower != 0.0 || col.upper != 1.0) {
        out += " " + number(col.lower) + " <= " + col.name + " <= " + number(col.upper) + "\n";
      }
      continue;
    }
    const bool lo_inf = col.lower == -kInfinity;
    const bool up_inf = col.upper == kInfinity;
    if (lo_inf && up_inf) {
      out += " " + col.name + " free\n";
    } else if (lo_inf) {
      out += " -inf <= " + col.name + " <= " + number(col.upper) + "\n";
    } else if (up_inf) {
      out += " " + col.name + " >= " + number(col.lower) + "\n";
    } else if (col.lower == col.upper) {
      out += " " + col.name + " = " + number(col.lower) + "\n";
    } else {
      out += " " + number(col.lower) + " <= " + col.name + " <= " + number(col.upper) + "\n";
    }
  }
  if (problem.num_binaries() > 0) {
    out += "Binaries\n";
    std::size_t written = 0;
    for (const auto& col : columns) {
      if (!col.binary) continue;
      out += (written % kTermsPerLine == 0) ? (written == 0 ? " " : "\n ") : " ";
      out += col.name;
      ++written;
    }
    out += "\n";
  }
  out += "End\n";
  return out;
}

}  // namespace lecopt
