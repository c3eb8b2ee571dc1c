// Bounded-variable primal simplex on a dense tableau.
//
// Every structural column is mapped onto one or two internal columns with
// bounds [0, u]. Rows become equalities through slacks, are sign-flipped to
// a non-negative right-hand side and get an artificial column when no slack
// can start in the basis. Phase one minimizes the artificial sum; phase two
// the real costs. Pricing is Dantzig's rule, switching to Bland's rule while
// the method stalls on degenerate pivots. Both rules break ties by lowest
// column index, so the result depends only on the input.

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lecopt/solver.hpp"

namespace lecopt {

std::string_view to_string(LpStatus status) {
  switch (status) {
    case LpStatus::Optimal: return "optimal";
    case LpStatus::Infeasible: return "infeasible";
    case LpStatus::Unbounded: return "unbounded";
    case LpStatus::IterationLimit: return "iteration-limit";
  }
  return "unknown";
}

namespace {

constexpr double kDropTolerance = 1e-12;
constexpr std::size_t kStallBeforeBland = 50;

enum class ColumnState : unsigned char { Basic, AtLower, AtUpper };

// How an internal column maps back to a structural one.
enum class Origin : unsigned char { Shifted, Negated, SplitPlus, SplitMinus, Slack, Artificial };

struct InternalColumn {
  Origin origin;
  std::size_t source;  // structural column, or row for slacks/artificials
  double upper;        // lower is always 0
  double cost;
};

class DenseSimplex {
 public:
  DenseSimplex(const MilpProblem& problem, std::span<const double> lower,
               std::span<const double> upper, const SolverTolerances& tol)
      : problem_(problem), lower_(lower), upper_(upper), tol_(tol) {}

  LpSolution solve();

 private:
  void build();
  double& at(std::size_t row, std::size_t col) { return tableau_[row * width_ + col]; }
  double at(std::size_t row, std::size_t col) const { return tableau_[row * width_ + col]; }

  void load_costs(bool phase_one);
  LpStatus iterate();
  std::size_t choose_entering() const;
  void pivot(std::size_t row, std::size_t col);
  void refresh_basic_values();
  void drive_out_artificials();
  double internal_value(std::size_t col) const;
  std::vector<double> structural_values() const;
  double dual_objective() const;

  const MilpProblem& problem_;
  std::span<const double> lower_;
  std::span<const double> upper_;
  SolverTolerances tol_;

  std::size_t rows_ = 0;
  std::size_t width_ = 0;
  std::vector<InternalColumn> columns_;
  std::vector<std::size_t> first_internal_;  // structural column -> internal column
  std::vector<double> tableau_;              // rows_ x width_, B^-1 A
  std::vector<double> rhs_;                  // transformed right-hand side
  std::vector<double> basic_value_;          // value of the basic variable per row
  std::vector<double> reduced_;              // reduced costs
  std::vector<double> costs_;                // current phase costs
  std::vector<std::size_t> basis_;           // basic column per row
  std::vector<ColumnState> state_;
  std::vector<std::size_t> identity_col_;    // column that formed e_i initially
  std::vector<double> row_sign_;
  std::size_t iterations_ = 0;
  std::size_t iteration_limit_ = 0;
  bool bland_ = false;
  std::size_t degenerate_run_ = 0;
};

void DenseSimplex::build() {
  const auto& cols = problem_.columns();
  const auto& rows = problem_.rows();
  rows_ = rows.size();

  first_internal_.resize(cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j) {
    const double lo = lower_[j];
    const double up = upper_[j];
    first_internal_[j] = columns_.size();
    if (lo > -kInfinity) {
      columns_.push_back({Origin::Shifted, j, up - lo, 0.0});
    } else if (up < kInfinity) {
      columns_.push_back({Origin::Negated, j, kInfinity, 0.0});
    } else {
      columns_.push_back({Origin::SplitPlus, j, kInfinity, 0.0});
      columns_.push_back({Origin::SplitMinus, j, kInfinity, 0.0});
    }
  }
  std::vector<std::size_t> slack_of(rows_, static_cast<std::size_t>(-1));
  for (std::size_t i = 0; i < rows_; ++i) {
    if (rows[i].sense != RowSense::Equal) {
      slack_of[i] = columns_.size();
      columns_.push_back({Origin::Slack, i, kInfinity, 0.0});
    }
  }

  // Row transformation and choice of the starting basis.
  rhs_.assign(rows_, 0.0);
  row_sign_.assign(rows_, 1.0);
  std::vector<double> slack_coef(rows_, 0.0);
  for (std::size_t i = 0; i < rows_; ++i) {
    double b = rows[i].rhs;
    for (const auto& term : rows[i].terms) {
      const auto j = term.column;
      if (lower_[j] > -kInfinity) {
        b -= term.coefficient * lower_[j];
      } else if (upper_[j] < kInfinity) {
        b -= term.coefficient * upper_[j];
      }
    }
    slack_coef[i] = rows[i].sense == RowSense::LessEqual    ? 1.0
                    : rows[i].sense == RowSense::GreaterEqual ? -1.0
                                                              : 0.0;
    if (b < 0.0) {
      row_sign_[i] = -1.0;
      b = -b;
      slack_coef[i] = -slack_coef[i];
    }
    rhs_[i] = b;
  }
  identity_col_.assign(rows_, 0);
  std::vector<std::size_t> artificial_of(rows_, static_cast<std::size_t>(-1));
  for (std::size_t i = 0; i < rows_; ++i) {
    if (slack_coef[i] == 1.0) {
      identity_col_[i] = slack_of[i];
    } else {
      artificial_of[i] = columns_.size();
      identity_col_[i] = columns_.size();
      columns_.push_back({Origin::Artificial, i, kInfinity, 0.0});
    }
  }
  width_ = columns_.size();

  tableau_.assign(rows_ * width_, 0.0);
  for (std::size_t i = 0; i < rows_; ++i) {
    const double sign = row_sign_[i];
    for (const auto& term : rows[i].terms) {
      const auto j = term.column;
      const std::size_t k = first_internal_[j];
      switch (columns_[k].origin) {
        case Origin::Shifted: at(i, k) += sign * term.coefficient; break;
        case Origin::Negated: at(i, k) -= sign * term.coefficient; break;
        default:
          at(i, k) += sign * term.coefficient;
          at(i, k + 1) -= sign * term.coefficient;
          break;
      }
    }
    if (slack_of[i] != static_cast<std::size_t>(-1)) at(i, slack_of[i]) = slack_coef[i];
    if (artificial_of[i] != static_cast<std::size_t>(-1)) at(i, artificial_of[i]) = 1.0;
  }

  basis_ = identity_col_;
  state_.assign(width_, ColumnState::AtLower);
  for (std::size_t i = 0; i < rows_; ++i) state_[basis_[i]] = ColumnState::Basic;
  basic_value_ = rhs_;
  iteration_limit_ = 50 * (rows_ + width_) + 10000;
}

void DenseSimplex::load_costs(bool phase_one) {
  costs_.assign(width_, 0.0);
  const auto& cols = problem_.columns();
  for (std::size_t k = 0; k < width_; ++k) {
    const auto& c = columns_[k];
    if (phase_one) {
      costs_[k] = c.origin == Origin::Artificial ? 1.0 : 0.0;
      continue;
    }
    switch (c.origin) {
      case Origin::Shifted:
      case Origin::SplitPlus: costs_[k] = cols[c.source].cost; break;
      case Origin::Negated:
      case Origin::SplitMinus: costs_[k] = -cols[c.source].cost; break;
      default: costs_[k] = 0.0; break;
    }
  }
  reduced_ = costs_;
  for (std::size_t i = 0; i < rows_; ++i) {
    const double cb = costs_[basis_[i]];
    if (cb == 0.0) continue;
    const double* row = &tableau_[i * width_];
    for (std::size_t k = 0; k < width_; ++k) reduced_[k] -= cb * row[k];
  }
  for (std::size_t i = 0; i < rows_; ++i) reduced_[basis_[i]] = 0.0;
}

std::size_t DenseSimplex::choose_entering() const {
  std::size_t best = width_;
  double best_score = 0.0;
  for (std::size_t k = 0; k < width_; ++k) {
    const ColumnState s = state_[k];
    if (s == ColumnState::Basic || columns_[k].upper <= 0.0) continue;
    const double d = reduced_[k];
    double score = 0.0;
    if (s == ColumnState::AtLower && d < -tol_.optimality) score = -d;
    if (s == ColumnState::AtUpper && d > tol_.optimality) score = d;
    if (score <= 0.0) continue;
    if (bland_) return k;
    if (score > best_score) {
      best_score = score;
      best = k;
    }
  }
  return best;
}

void DenseSimplex::pivot(std::size_t r, std::size_t q) {
  double* prow = &tableau_[r * width_];
  const double inv = 1.0 / prow[q];
  std::vector<std::size_t> nonzero;
  nonzero.reserve(64);
  for (std::size_t k = 0; k < width_; ++k) {
    if (prow[k] == 0.0) continue;
    prow[k] *= inv;
    if (std::abs(prow[k]) < kDropTolerance) {
      prow[k] = 0.0;
      continue;
    }
    nonzero.push_back(k);
  }
  prow[q] = 1.0;
  for (std::size_t i = 0; i < rows_; ++i) {
    if (i == r) continue;
    double* row = &tableau_[i * width_];
    const double f = row[q];
    if (f == 0.0) continue;
    for (std::size_t k : nonzero) {
      double v = row[k] - f * prow[k];
      row[k] = std::abs(v) < kDropTolerance ? 0.0 : v;
    }
    row[q] = 0.0;
  }
  const double f = reduced_[q];
  if (f != 0.0) {
    for (std::size_t k : nonzero) reduced_[k] -= f * prow[k];
  }
  reduced_[q] = 0.0;
  state_[basis_[r]] = ColumnState::AtLower;  // caller fixes the final state
  basis_[r] = q;
  state_[q] = ColumnState::Basic;
}

double DenseSimplex::internal_value(std::size_t col) const {
  return state_[col] == ColumnState::AtUpper ? columns_[col].upper : 0.0;
}

LpStatus DenseSimplex::iterate() {
  while (true) {
    if (iterations_ >= iteration_limit_) return LpStatus::IterationLimit;
    const std::size_t q = choose_entering();
    if (q == width_) return LpStatus::Optimal;
    ++iterations_;

    const double dir = state_[q] == ColumnState::AtLower ? 1.0 : -1.0;
    double step = columns_[q].upper;  // bound flip
    std::size_t leave = rows_;
    bool leave_to_upper = false;
    double leave_alpha = 0.0;
    for (std::size_t i = 0; i < rows_; ++i) {
      const double alpha = dir * at(i, q);
      if (std::abs(alpha) <= tol_.pivot) continue;
      double limit;
      bool to_upper;
      if (alpha > 0.0) {
        limit = std::max(basic_value_[i], 0.0) / alpha;
        to_upper = false;
      } else {
        const double ub = columns_[basis_[i]].upper;
        if (ub == kInfinity) continue;
        limit = std::max(ub - basic_value_[i], 0.0) / -alpha;
        to_upper = true;
      }
      bool better = limit < step;
      if (!better && leave < rows_ && limit == step) {
        // Ties: larger pivot magnitude, then lowest basic column.
        if (!bland_ && std::abs(alpha) > std::abs(leave_alpha)) {
          better = true;
        } else if ((bland_ || std::abs(alpha) == std::abs(leave_alpha)) &&
                   basis_[i] < basis_[leave]) {
          better = true;
        }
      }
      if (better) {
        step = limit;
        leave = i;
        leave_to_upper = to_upper;
        leave_alpha = alpha;
      }
    }
    if (step == kInfinity) return LpStatus::Unbounded;

    if (step <= kDropTolerance) {
      if (++degenerate_run_ >= kStallBeforeBland) bland_ = true;
    } else {
      degenerate_run_ = 0;
      bland_ = false;
    }

    for (std::size_t i = 0; i < rows_; ++i) {
      const double a = at(i, q);
      if (a != 0.0) basic_value_[i] -= dir * a * step;
    }
    if (leave == rows_) {
      state_[q] = state_[q] == ColumnState::AtLower ? ColumnState::AtUpper : ColumnState::AtLower;
      continue;
    }
    const double entering_value = internal_value(q) + dir * step;
    const std::size_t leaving = basis_[leave];
    pivot(leave, q);
    basic_value_[leave] = entering_value;
    state_[leaving] = leave_to_upper ? ColumnState::AtUpper : ColumnState::AtLower;
    if (columns_[leaving].origin == Origin::Artificial) {
      columns_[leaving].upper = 0.0;
      state_[leaving] = ColumnState::AtLower;
    }
  }
}

void DenseSimplex::refresh_basic_values() {
  // x_B = B^-1 b - sum over columns at upper of (B^-1 A_k) u_k
  for (std::size_t i = 0; i < rows_; ++i) {
    double v = 0.0;
    const double* row = &tableau_[i * width_];
    for (std::size_t r = 0; r < rows_; ++r) v += row[identity_col_[r]] * rhs_[r];
    for (std::size_t k = 0; k < width_; ++k) {
      if (state_[k] == ColumnState::AtUpper && row[k] != 0.0) v -= row[k] * columns_[k].upper;
    }
    basic_value_[i] = v;
  }
}

void DenseSimplex::drive_out_artificials() {
  for (std::size_t r = 0; r < rows_; ++r) {
    if (columns_[basis_[r]].origin != Origin::Artificial) continue;
    std::size_t best = width_;
    double best_mag = 1e-7;
    for (std::size_t k = 0; k < width_; ++k) {
      if (state_[k] == ColumnState::Basic || columns_[k].origin == Origin::Artificial) continue;
      const double mag = std::abs(at(r, k));
      if (mag > best_mag) {
        best_mag = mag;
        best = k;
      }
    }
    const std::size_t artificial = basis_[r];
    if (best == width_) {
      // Redundant row: the artificial stays basic, pinned at zero.
      columns_[artificial].upper = 0.0;
      continue;
    }
    const double value = internal_value(best);
    pivot(r, best);
    basic_value_[r] = value;
    columns_[artificial].upper = 0.0;
    state_[artificial] = ColumnState::AtLower;
  }
  for (auto& c : columns_) {
    if (c.origin == Origin::Artificial) c.upper = 0.0;
  }
}

std::vector<double> DenseSimplex::structural_values() const {
  std::vector<double> internal(width_, 0.0);
  for (std::size_t k = 0; k < width_; ++k) internal[k] = internal_value(k);
  for (std::size_t i = 0; i < rows_; ++i) internal[basis_[i]] = basic_value_[i];

  const auto& cols = problem_.columns();
  std::vector<double> x(cols.size(), 0.0);
  for (std::size_t j = 0; j < cols.size(); ++j) {
    const std::size_t k = first_internal_[j];
    switch (columns_[k].origin) {
      case Origin::Shifted: x[j] = lower_[j] + internal[k]; break;
      case Origin::Negated: x[j] = upper_[j] - internal[k]; break;
      default: x[j] = internal[k] - internal[k + 1]; break;
    }
    // Snap onto bounds violated by round-off only.
    if (x[j] < lower_[j]) x[j] = lower_[j];
    if (x[j] > upper_[j]) x[j] = upper_[j];
  }
  return x;
}

double DenseSimplex::dual_objective() const {
  // Row duals y = c_B B^-1, read from the columns that formed the initial
  // identity, then a dual objective computed against the original data.
  const auto& rows = problem_.rows();
  const auto& cols = problem_.columns();
  std::vector<double> y(rows_, 0.0);
  for (std::size_t r = 0; r < rows_; ++r) {
    double v = 0.0;
    for (std::size_t i = 0; i < rows_; ++i) {
      const double cb = costs_[basis_[i]];
      if (cb != 0.0) v += cb * at(i, identity_col_[r]);
    }
    y[r] = row_sign_[r] * v;
  }
  std::vector<double> reduced(cols.size(), 0.0);
  for (std::size_t j = 0; j < cols.size(); ++j) reduced[j] = cols[j].cost;
  double bound = problem_.objective_constant();
  for (std::size_t i = 0; i < rows_; ++i) {
    for (const auto& term : rows[i].terms) reduced[term.column] -= y[i] * term.coefficient;
    bound += y[i] * rows[i].rhs;
    // Slack sign condition: y <= 0 on <= rows, y >= 0 on >= rows.
    const double wrong_sign = rows[i].sense == RowSense::LessEqual      ? y[i]
                              : rows[i].sense == RowSense::GreaterEqual ? -y[i]
                                                                        : 0.0;
    if (wrong_sign > tol_.feasibility) return -kInfinity;
  }
  for (std::size_t j = 0; j < cols.size(); ++j) {
    const double d = reduced[j];
    if (std::abs(d) <= tol_.optimality) {
      // Contributes d * x_j for any x_j in range; use the lower bound when finite.
      if (lower_[j] > -kInfinity) bound += d * lower_[j];
      continue;
    }
    const double b = d > 0.0 ? lower_[j] : upper_[j];
    if (!std::isfinite(b)) return -kInfinity;
    bound += d * b;
  }
  return bound;
}

LpSolution DenseSimplex::solve() {
  LpSolution out;
  for (std::size_t j = 0; j < problem_.num_columns(); ++j) {
    if (lower_[j] > upper_[j] + tol_.feasibility) {
      out.status = LpStatus::Infeasible;
      return out;
    }
  }
  build();

  load_costs(true);
  LpStatus status = iterate();
  if (status == LpStatus::IterationLimit) {
    out.status = status;
    out.iterations = iterations_;
    return out;
  }
  refresh_basic_values();
  double infeasibility = 0.0;
  for (std::size_t i = 0; i < rows_; ++i) {
    const auto& c = columns_[basis_[i]];
    if (c.origin == Origin::Artificial && basic_value_[i] > tol_.feasibility) {
      infeasibility += basic_value_[i];
      out.infeasible_rows.push_back(c.source);
    }
  }
  if (infeasibility > 0.0) {
    std::sort(out.infeasible_rows.begin(), out.infeasible_rows.end());
    out.status = LpStatus::Infeasible;
    out.iterations = iterations_;
    return out;
  }
  drive_out_artificials();

  bland_ = false;
  degenerate_run_ = 0;
  load_costs(false);
  status = iterate();
  out.iterations = iterations_;
  if (status != LpStatus::Optimal) {
    out.status = status;
    return out;
  }
  refresh_basic_values();
  out.values = structural_values();
  out.objective = problem_.objective(out.values);
  out.dual_bound = dual_objective();
  out.status = LpStatus::Optimal;
  return out;
}

}  // namespace

LpSolution solve_lp_bounded(const MilpProblem& problem, std::span<const double> lower,
                            std::span<const double> upper, const SolverTolerances& tolerances) {
  if (lower.size() != problem.num_columns() || upper.size() != problem.num_columns()) {
    throw std::invalid_argument("bound vectors do not match the column count");
  }
  DenseSimplex simplex(problem, lower, upper, tolerances);
  return simplex.solve();
}

LpSolution solve_lp(const MilpProblem& problem, bool relax_binaries) {
  problem.check_well_formed();
  std::vector<double> lower, upper;
  lower.reserve(problem.num_columns());
  upper.reserve(problem.num_columns());
  for (const auto& col : problem.columns()) {
    if (col.binary && !relax_binaries && col.lower != col.upper) {
      throw std::invalid_argument("binary column " + col.name +
                                  " is not fixed; solve with relax_binaries or solve_milp");
    }
    lower.push_back(col.lower);
    upper.push_back(col.upper);
  }
  return solve_lp_bounded(problem, lower, upper);
}

}  // namespace lecopt
