#include <charconv>
#include <cmath>
#include <istream>
#include <sstream>
#include <stdexcept>

#include "lecopt/solver.hpp"

namespace lecopt {

bool ViolationReport::mentions(std::string_view fragment) const {
  for (const auto& v : violations) {
    if (v.name.find(fragment) != std::string::npos) return true;
  }
  return false;
}

std::string ViolationReport::to_string() const {
  std::ostringstream out;
  for (const auto& v : violations) out << v.name << ": " << v.message << '\n';
  return out.str();
}

ViolationReport verify_solution(const MilpProblem& problem, const std::vector<double>& values,
                                double tolerance) {
  ViolationReport report;
  if (values.size() != problem.num_columns()) {
    std::ostringstream msg;
    msg << "solution has " << values.size() << " values for " << problem.num_columns()
        << " columns";
    report.violations.push_back({SolutionViolation::Kind::Size, "solution", msg.str()});
    return report;
  }
  for (std::size_t j = 0; j < problem.num_columns(); ++j) {
    const Column& col = problem.column(j);
    const double v = values[j];
    if (!std::isfinite(v) || v < col.lower - tolerance || v > col.upper + tolerance) {
      std::ostringstream msg;
      msg << "value " << v << " outside [" << col.lower << ", " << col.upper << "]";
      report.violations.push_back({SolutionViolation::Kind::Bound, col.name, msg.str()});
    }
    if (col.binary && std::abs(v - std::round(v)) > tolerance) {
      std::ostringstream msg;
      msg << "binary takes fractional value " << v;
      report.violations.push_back({SolutionViolation::Kind::Integrality, col.name, msg.str()});
    }
  }
  for (std::size_t i = 0; i < problem.num_rows(); ++i) {
    const Row& row = problem.row(i);
    double activity = 0.0;
    for (const auto& term : row.terms) activity += term.coefficient * values[term.column];
    const bool low = row.sense != RowSense::LessEqual && activity < row.rhs - tolerance;
    const bool high = row.sense != RowSense::GreaterEqual && activity > row.rhs + tolerance;
    if (low || high) {
      std::ostringstream msg;
      msg.precision(10);
      msg << "activity " << activity << (high ? " > " : " < ") << row.rhs;
      report.violations.push_back({SolutionViolation::Kind::Row, row.name, msg.str()});
    }
  }
  return report;
}

std::vector<double> read_solution_text(std::istream& in, const MilpProblem& problem) {
  std::vector<double> values(problem.num_columns(), 0.0);
  std::vector<bool> seen(problem.num_columns(), false);
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("# Rows", 0) == 0 || line.rfind("# Dual", 0) == 0) break;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream fields(line);
    std::string name, number, extra;
    if (!(fields >> name >> number) || (fields >> extra)) continue;
    const std::size_t col = problem.find_column(name);
    if (col == MilpProblem::npos) continue;
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(number.data(), number.data() + number.size(), v);
    if (ec != std::errc{} || ptr != number.data() + number.size()) {
      throw std::runtime_error("solution value for " + name + " is not a number: " + number);
    }
    values[col] = v;
    seen[col] = true;
  }
  for (std::size_t j = 0; j < seen.size(); ++j) {
    if (!seen[j]) throw std::runtime_error("solution file has no value for " + problem.column(j).name);
  }
  return values;
}

}  // namespace lecopt
