#include "lecopt/milp.hpp"

#include <cmath>
#include <stdexcept>

namespace lecopt {

std::size_t MilpProblem::add_column(std::string name, double lower, double upper, double cost) {
  const std::size_t index = columns_.size();
  if (!by_name_.emplace(name, index).second) {
    throw std::invalid_argument("duplicate column name " + name);
  }
  columns_.push_back({std::move(name), lower, upper, cost, false, 0});
  return index;
}

std::size_t MilpProblem::add_binary(std::string name, double cost) {
  const std::size_t index = add_column(std::move(name), 0.0, 1.0, cost);
  columns_[index].binary = true;
  return index;
}

std::size_t MilpProblem::add_row(std::string name, std::vector<Term> terms, RowSense sense,
                                 double rhs) {
  rows_.push_back({std::move(name), std::move(terms), sense, rhs});
  return rows_.size() - 1;
}

void MilpProblem::set_bounds(std::size_t column, double lower, double upper) {
  auto& col = columns_.at(column);
  col.lower = lower;
  col.upper = upper;
}

std::size_t MilpProblem::num_binaries() const {
  std::size_t n = 0;
  for (const auto& c : columns_) n += c.binary ? 1 : 0;
  return n;
}

std::size_t MilpProblem::find_column(std::string_view name) const {
  auto it = by_name_.find(name);
  return it == by_name_.end() ? npos : it->second;
}

double MilpProblem::objective(const std::vector<double>& values) const {
  double total = objective_constant_;
  for (std::size_t j = 0; j < columns_.size(); ++j) total += columns_[j].cost * values[j];
  return total;
}

double MilpProblem::row_activity(std::size_t row, const std::vector<double>& values) const {
  double total = 0.0;
  for (const auto& term : rows_[row].terms) total += term.coefficient * values[term.column];
  return total;
}

void MilpProblem::check_well_formed() const {
  if (!std::isfinite(objective_constant_)) {
    throw std::invalid_argument("objective constant is not finite");
  }
  for (const auto& col : columns_) {
    if (!std::isfinite(col.cost)) throw std::invalid_argument("non-finite cost on " + col.name);
    if (std::isnan(col.lower) || std::isnan(col.upper) || col.lower > col.upper ||
        col.lower == kInfinity || col.upper == -kInfinity) {
      throw std::invalid_argument("invalid bounds on " + col.name);
    }
    if (col.binary && (col.lower < 0.0 || col.upper > 1.0)) {
      throw std::invalid_argument("binary " + col.name + " has bounds outside [0, 1]");
    }
  }
  for (const auto& row : rows_) {
    if (!std::isfinite(row.rhs)) throw std::invalid_argument("non-finite rhs on " + row.name);
    for (const auto& term : row.terms) {
      if (term.column >= columns_.size()) {
        throw std::invalid_argument("row " + row.name + " references unknown column");
      }
      if (!std::isfinite(term.coefficient)) {
        throw std::invalid_argument("non-finite coefficient in row " + row.name);
      }
    }
  }
}

}  // namespace lecopt
