#include <algorithm>
#include <chrono>
#include <cmath>
#include <optional>
#include <queue>

#include "lecopt/solver.hpp"

namespace lecopt {

std::string_view to_string(MilpStatus status) {
  switch (status) {
    case MilpStatus::Optimal: return "optimal";
    case MilpStatus::Infeasible: return "infeasible";
    case MilpStatus::Unbounded: return "unbounded";
    case MilpStatus::LimitReached: return "limit-reached";
  }
  return "unknown";
}

namespace {

constexpr double kFeasibility = 1e-7;

struct Node {
  double bound;  // parent relaxation objective
  std::size_t depth;
  std::size_t id;
  std::vector<std::pair<std::size_t, double>> fixings;  // binary column -> 0/1
};

// Best bound first; among equal bounds the deeper node, then creation order.
struct NodeOrder {
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;
    if (a.depth != b.depth) return a.depth < b.depth;
    return a.id > b.id;
  }
};

class BranchAndBound {
 public:
  BranchAndBound(const MilpProblem& problem, const MilpConfig& config)
      : problem_(problem), config_(config), rows_of_(problem.num_columns()) {
    for (std::size_t i = 0; i < problem.num_rows(); ++i) {
      for (const auto& term : problem.row(i).terms) rows_of_[term.column].push_back(i);
    }
    for (std::size_t j = 0; j < problem.num_columns(); ++j) {
      if (problem.column(j).binary) binaries_.push_back(j);
    }
  }

  MilpSolution run();

 private:
  LpSolution solve_node(const Node& node, std::vector<double>& lower, std::vector<double>& upper);
  std::optional<std::vector<double>> round_greedily(const std::vector<double>& relaxed,
                                                    const std::vector<double>& lower,
                                                    const std::vector<double>& upper) const;
  bool rows_satisfied(const std::vector<double>& activity) const;
  void offer_incumbent(std::vector<double> values);
  std::size_t most_fractional(const std::vector<double>& values) const;
  double prune_tolerance() const {
    return config_.relative_gap * std::max(1.0, std::abs(result_.objective));
  }
  bool limits_hit(std::chrono::steady_clock::time_point start) const;

  const MilpProblem& problem_;
  MilpConfig config_;
  std::vector<std::vector<std::size_t>> rows_of_;
  std::vector<std::size_t> binaries_;
  MilpSolution result_;
};

bool BranchAndBound::rows_satisfied(const std::vector<double>& activity) const {
  for (std::size_t i = 0; i < problem_.num_rows(); ++i) {
    const Row& row = problem_.row(i);
    const double slack = kFeasibility;
    if (row.sense != RowSense::GreaterEqual && activity[i] > row.rhs + slack) return false;
    if (row.sense != RowSense::LessEqual && activity[i] < row.rhs - slack) return false;
  }
  return true;
}

// Starts every free binary at its lower bound and raises a binary to one
// only when that repairs a violated row without breaking another. The
// continuous part of the relaxation is kept as is.
std::optional<std::vector<double>> BranchAndBound::round_greedily(
    const std::vector<double>& relaxed, const std::vector<double>& lower,
    const std::vector<double>& upper) const {
  std::vector<double> x = relaxed;
  for (std::size_t j : binaries_) x[j] = lower[j] > 0.5 ? 1.0 : 0.0;
  std::vector<double> activity(problem_.num_rows());
  for (std::size_t i = 0; i < problem_.num_rows(); ++i) activity[i] = problem_.row_activity(i, x);

  auto violation = [&](std::size_t i, double value) {
    const Row& row = problem_.row(i);
    const double slack = kFeasibility;
    double v = 0.0;
    if (row.sense != RowSense::GreaterEqual) v = std::max(v, value - row.rhs - slack);
    if (row.sense != RowSense::LessEqual) v = std::max(v, row.rhs - slack - value);
    return v;
  };

  for (std::size_t j : binaries_) {
    if (x[j] == 1.0 || upper[j] < 0.5) continue;
    bool helps = false;
    bool hurts = false;
    for (std::size_t i : rows_of_[j]) {
      double coef = 0.0;
      for (const auto& term : problem_.row(i).terms) {
        if (term.column == j) coef += term.coefficient;
      }
      const double before = violation(i, activity[i]);
      const double after = violation(i, activity[i] + coef);
      if (after < before) helps = true;
      if (after > before) hurts = true;
    }
    if (!helps || hurts) continue;
    x[j] = 1.0;
    for (std::size_t i : rows_of_[j]) {
      for (const auto& term : problem_.row(i).terms) {
        if (term.column == j) activity[i] += term.coefficient;
      }
    }
  }
  if (!rows_satisfied(activity)) return std::nullopt;
  return x;
}

void BranchAndBound::offer_incumbent(std::vector<double> values) {
  for (std::size_t j : binaries_) values[j] = values[j] > 0.5 ? 1.0 : 0.0;
  const double objective = problem_.objective(values);
  if (result_.has_incumbent && objective >= result_.objective - prune_tolerance()) return;
  result_.has_incumbent = true;
  result_.objective = objective;
  result_.values = std::move(values);
  result_.incumbent_history.push_back(objective);
}

std::size_t BranchAndBound::most_fractional(const std::vector<double>& values) const {
  std::size_t best = problem_.num_columns();
  double best_frac = config_.integrality_tolerance;
  int best_priority = 0;
  for (std::size_t j : binaries_) {
    const double frac = std::min(values[j], 1.0 - values[j]);
    if (frac <= config_.integrality_tolerance) continue;
    const int priority = problem_.column(j).branch_priority;
    if (best == problem_.num_columns() || priority > best_priority ||
        (priority == best_priority && frac > best_frac)) {
      best_frac = frac;
      best_priority = priority;
      best = j;
    }
  }
  return best;
}

LpSolution BranchAndBound::solve_node(const Node& node, std::vector<double>& lower,
                                      std::vector<double>& upper) {
  for (std::size_t j = 0; j < problem_.num_columns(); ++j) {
    lower[j] = problem_.column(j).lower;
    upper[j] = problem_.column(j).upper;
  }
  for (const auto& [col, value] : node.fixings) lower[col] = upper[col] = value;
  LpSolution lp = solve_lp_bounded(problem_, lower, upper);
  result_.lp_iterations += lp.iterations;
  ++result_.node_count;
  return lp;
}

bool BranchAndBound::limits_hit(std::chrono::steady_clock::time_point start) const {
  if (result_.node_count > config_.node_limit) return true;  // root is not counted
  return std::chrono::steady_clock::now() - start > config_.time_limit;
}

MilpSolution BranchAndBound::run() {
  const auto start = std::chrono::steady_clock::now();
  std::vector<double> lower(problem_.num_columns());
  std::vector<double> upper(problem_.num_columns());

  // Root relaxation.
  Node root{-kInfinity, 0, 0, {}};
  LpSolution lp = solve_node(root, lower, upper);
  if (lp.status == LpStatus::Infeasible) {
    result_.status = MilpStatus::Infeasible;
    result_.infeasible_rows = lp.infeasible_rows;
    return result_;
  }
  if (lp.status == LpStatus::Unbounded) {
    result_.status = MilpStatus::Unbounded;
    return result_;
  }
  if (lp.status != LpStatus::Optimal) {
    result_.status = MilpStatus::LimitReached;
    return result_;
  }
  result_.best_bound = lp.objective;

  std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
  std::size_t next_id = 1;
  auto process = [&](const Node& node, LpSolution& relaxation) {
    if (result_.has_incumbent && relaxation.objective >= result_.objective - prune_tolerance()) {
      return;
    }
    const std::size_t branch = most_fractional(relaxation.values);
    if (branch == problem_.num_columns()) {
      offer_incumbent(std::move(relaxation.values));
      return;
    }
    if (auto rounded = round_greedily(relaxation.values, lower, upper)) {
      offer_incumbent(std::move(*rounded));
      if (result_.objective <= relaxation.objective + prune_tolerance()) return;
    }
    for (double value : {0.0, 1.0}) {
      Node child{relaxation.objective, node.depth + 1, next_id++, node.fixings};
      child.fixings.emplace_back(branch, value);
      open.push(std::move(child));
    }
  };

  process(root, lp);
  result_.solved_at_root = result_.has_incumbent && open.empty();

  while (!open.empty()) {
    if (limits_hit(start)) break;
    Node node = open.top();
    open.pop();
    if (result_.has_incumbent && node.bound >= result_.objective - prune_tolerance()) continue;
    LpSolution relaxation = solve_node(node, lower, upper);
    if (relaxation.status != LpStatus::Optimal) continue;
    process(node, relaxation);
  }

  // Drop nodes the final incumbent already dominates.
  double open_bound = kInfinity;
  while (!open.empty()) {
    const Node& node = open.top();
    if (!result_.has_incumbent || node.bound < result_.objective - prune_tolerance()) {
      open_bound = std::min(open_bound, node.bound);
    }
    open.pop();
  }

  if (open_bound == kInfinity) {
    if (!result_.has_incumbent) {
      result_.status = MilpStatus::Infeasible;
      return result_;
    }
    result_.status = MilpStatus::Optimal;
    result_.best_bound = result_.objective;
    result_.gap = 0.0;
    return result_;
  }
  result_.status = MilpStatus::LimitReached;
  result_.best_bound = std::max(result_.best_bound, open_bound);
  if (result_.has_incumbent) result_.best_bound = std::min(result_.best_bound, result_.objective);
  result_.gap = result_.has_incumbent ? result_.objective - result_.best_bound : kInfinity;
  return result_;
}

}  // namespace

MilpSolution solve_milp(const MilpProblem& problem, const MilpConfig& config) {
  problem.check_well_formed();
  BranchAndBound bb(problem, config);
  return bb.run();
}

}  // namespace lecopt
