#pragma once

// Sparse mixed-integer linear program: minimize c'x + constant subject to
// row constraints and column bounds, with some columns restricted to {0, 1}.

#include <cstddef>
#include <limits>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace lecopt {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class RowSense { LessEqual, Equal, GreaterEqual };

struct Term {
  std::size_t column = 0;
  double coefficient = 0.0;
};

struct Row {
  std::string name;
  std::vector<Term> terms;
  RowSense sense = RowSense::Equal;
  double rhs = 0.0;
};

struct Column {
  std::string name;
  double lower = 0.0;
  double upper = kInfinity;
  double cost = 0.0;
  bool binary = false;
  // Branch-and-bound branches on fractional binaries of the highest
  // priority first.
  int branch_priority = 0;
};

class MilpProblem {
 public:
  MilpProblem() = default;
  explicit MilpProblem(std::string label) : label_(std::move(label)) {}

  std::size_t add_column(std::string name, double lower, double upper, double cost = 0.0);
  std::size_t add_binary(std::string name, double cost = 0.0);
  std::size_t add_row(std::string name, std::vector<Term> terms, RowSense sense, double rhs);

  void set_cost(std::size_t column, double cost) { columns_.at(column).cost = cost; }
  void set_bounds(std::size_t column, double lower, double upper);
  void set_branch_priority(std::size_t column, int priority) {
    columns_.at(column).branch_priority = priority;
  }
  void set_objective_constant(double value) { objective_constant_ = value; }
  void set_label(std::string label) { label_ = std::move(label); }

  const std::vector<Column>& columns() const { return columns_; }
  const std::vector<Row>& rows() const { return rows_; }
  const Column& column(std::size_t j) const { return columns_[j]; }
  const Row& row(std::size_t i) const { return rows_[i]; }
  std::size_t num_columns() const { return columns_.size(); }
  std::size_t num_rows() const { return rows_.size(); }
  std::size_t num_binaries() const;
  double objective_constant() const { return objective_constant_; }
  const std::string& label() const { return label_; }

  /// Column index by name, or npos.
  std::size_t find_column(std::string_view name) const;
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  /// c'x + constant.
  double objective(const std::vector<double>& values) const;
  double row_activity(std::size_t row, const std::vector<double>& values) const;

  /// Throws std::invalid_argument on NaN/infinite data, out-of-range column
  /// references, inverted bounds or binaries with bounds outside [0, 1].
  void check_well_formed() const;

 private:
  std::string label_;
  std::vector<Column> columns_;
  std::vector<Row> rows_;
  std::map<std::string, std::size_t, std::less<>> by_name_;
  double objective_constant_ = 0.0;
};

}  // namespace lecopt
