#pragma once

// Embedded exact solver: bounded-variable primal simplex on a dense tableau
// and best-first branch-and-bound over the binary columns.

#include <chrono>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "lecopt/milp.hpp"

namespace lecopt {

struct SolverTolerances {
  double feasibility = 1e-7;
  double optimality = 1e-9;
  double pivot = 1e-9;
};

enum class LpStatus { Optimal, Infeasible, Unbounded, IterationLimit };
std::string_view to_string(LpStatus status);

struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  std::vector<double> values;  // per column; empty unless Optimal
  double objective = 0.0;      // includes the problem's constant
  // Objective of the dual solution read off the final basis. Equal to
  // `objective` up to round-off at a true optimum.
  double dual_bound = -kInfinity;
  std::size_t iterations = 0;
  // Rows still carrying phase-one infeasibility when status is Infeasible.
  std::vector<std::size_t> infeasible_rows;
};

/// Solves the continuous problem. With relax_binaries the binary columns are
/// treated as continuous in [0, 1]; without it every binary column must
/// already be fixed by its bounds (std::invalid_argument otherwise).
LpSolution solve_lp(const MilpProblem& problem, bool relax_binaries);

/// Same as solve_lp with relaxed binaries, but with the column bounds
/// replaced by `lower` / `upper`.
LpSolution solve_lp_bounded(const MilpProblem& problem, std::span<const double> lower,
                            std::span<const double> upper,
                            const SolverTolerances& tolerances = {});

struct MilpConfig {
  double integrality_tolerance = 1e-6;
  double relative_gap = 1e-9;
  // Branched nodes allowed beyond the root relaxation.
  std::size_t node_limit = 200000;
  std::chrono::milliseconds time_limit{std::chrono::minutes(5)};
};

enum class MilpStatus { Optimal, Infeasible, Unbounded, LimitReached };
std::string_view to_string(MilpStatus status);

struct MilpSolution {
  MilpStatus status = MilpStatus::Infeasible;
  bool has_incumbent = false;
  std::vector<double> values;  // incumbent, binaries snapped to {0, 1}
  double objective = kInfinity;
  double best_bound = -kInfinity;
  double gap = kInfinity;  // objective - best_bound; 0 when Optimal
  std::size_t node_count = 0;
  std::size_t lp_iterations = 0;
  // True when the root relaxation was integral, or rounded to a feasible
  // point with the same objective, so no branching happened.
  bool solved_at_root = false;
  std::vector<double> incumbent_history;
  std::vector<std::size_t> infeasible_rows;  // root diagnostics
};

MilpSolution solve_milp(const MilpProblem& problem, const MilpConfig& config = {});

struct SolutionViolation {
  enum class Kind { Row, Bound, Integrality, Size };
  Kind kind = Kind::Row;
  std::string name;  // row or column name
  std::string message;
};

struct ViolationReport {
  std::vector<SolutionViolation> violations;
  bool empty() const { return violations.empty(); }
  bool mentions(std::string_view name_fragment) const;
  std::string to_string() const;
};

inline constexpr double kVerifyTolerance = 1e-6;

/// Independent re-check of every row, bound and integrality requirement.
ViolationReport verify_solution(const MilpProblem& problem, const std::vector<double>& values,
                                double tolerance = kVerifyTolerance);

/// Reads "column value" pairs, as written by external LP solvers. Lines
/// that do not name a column are skipped, and a "# Rows" or "# Dual" header
/// ends the primal section. Throws std::runtime_error if a column is missing.
std::vector<double> read_solution_text(std::istream& in, const MilpProblem& problem);

}  // namespace lecopt
