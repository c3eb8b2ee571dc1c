#include <doctest.h>

#include <random>
#include <sstream>

#include "lecopt/model.hpp"
#include "lecopt/solver.hpp"
#include "synthetic.hpp"

using namespace lecopt;
using lecopt::testing::flat_community;
using lecopt::testing::synthetic_community;

namespace {

// max 5a + 6b + 7c  s.t. 4a + 5b + 6c <= 10, written as a minimization.
MilpProblem knapsack() {
  MilpProblem p("knapsack");
  const auto a = p.add_binary("a", -5.0);
  const auto b = p.add_binary("b", -6.0);
  const auto c = p.add_binary("c", -7.0);
  p.add_row("capacity", {{a, 4.0}, {b, 5.0}, {c, 6.0}}, RowSense::LessEqual, 10.0);
  return p;
}

// Random bounded LP with a known feasible point.
MilpProblem random_lp(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> coef(-5.0, 5.0);
  std::uniform_real_distribution<double> point(0.0, 3.0);
  const std::size_t n = 3 + rng() % 6;
  const std::size_t m = 2 + rng() % 6;
  MilpProblem p("random");
  std::vector<double> x0(n);
  for (std::size_t j = 0; j < n; ++j) {
    p.add_column("x" + std::to_string(j), 0.0, 4.0, coef(rng));
    x0[j] = point(rng);
  }
  for (std::size_t i = 0; i < m; ++i) {
    std::vector<Term> terms;
    double activity = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double a = coef(rng);
      terms.push_back({j, a});
      activity += a * x0[j];
    }
    const auto sense = static_cast<RowSense>(rng() % 3);
    const double slack = sense == RowSense::Equal ? 0.0 : std::abs(coef(rng));
    const double rhs = sense == RowSense::LessEqual ? activity + slack : activity - slack;
    p.add_row("r" + std::to_string(i), std::move(terms), sense, rhs);
  }
  return p;
}

// Dual of min c'x, Ax (sense) b, l <= x <= u built explicitly, so weak duality
// can be checked against an independently solved problem.
double dual_objective(const MilpProblem& primal) {
  MilpProblem dual("dual");
  const std::size_t n = primal.num_columns();
  std::vector<std::vector<Term>> col_terms(n);
  std::vector<double> dual_cost;
  for (std::size_t i = 0; i < primal.num_rows(); ++i) {
    const Row& r = primal.row(i);
    double lo = -kInfinity, up = kInfinity;
    if (r.sense == RowSense::LessEqual) up = 0.0;
    if (r.sense == RowSense::GreaterEqual) lo = 0.0;
    const auto y = dual.add_column("y" + std::to_string(i), lo, up, -r.rhs);
    for (const auto& t : r.terms) col_terms[t.column].push_back({y, t.coefficient});
  }
  // Reduced cost split into bound multipliers: c - A'y = zl - zu, zl, zu >= 0.
  for (std::size_t j = 0; j < n; ++j) {
    const Column& c = primal.column(j);
    const auto zl = dual.add_column("zl" + std::to_string(j), 0.0, kInfinity, -c.lower);
    const auto zu = dual.add_column("zu" + std::to_string(j), 0.0, kInfinity, c.upper);
    auto terms = col_terms[j];
    terms.push_back({zl, 1.0});
    terms.push_back({zu, -1.0});
    dual.add_row("d" + std::to_string(j), std::move(terms), RowSense::Equal, c.cost);
  }
  const LpSolution sol = solve_lp(dual, false);
  REQUIRE(sol.status == LpStatus::Optimal);
  return -sol.objective;
}

}  // namespace

TEST_SUITE("solver") {
  TEST_CASE("one-variable problems") {
    MilpProblem lower("lower");
    const auto x = lower.add_column("x", 0.0, kInfinity, 1.0);
    lower.add_row("c", {{x, 1.0}}, RowSense::GreaterEqual, 1.0);
    const MilpSolution a = solve_milp(lower);
    REQUIRE(a.status == MilpStatus::Optimal);
    CHECK(a.values[0] == doctest::Approx(1.0));
    CHECK(a.objective == doctest::Approx(1.0));

    MilpProblem upper("upper");
    const auto y = upper.add_column("y", 0.0, kInfinity, -1.0);
    upper.add_row("c", {{y, 1.0}}, RowSense::LessEqual, 5.0);
    const MilpSolution b = solve_milp(upper);
    REQUIRE(b.status == MilpStatus::Optimal);
    CHECK(b.values[0] == doctest::Approx(5.0));
    CHECK(b.objective == doctest::Approx(-5.0));

    MilpProblem clash("clash");
    const auto z = clash.add_column("z", 0.0, kInfinity);
    clash.add_row("ge", {{z, 1.0}}, RowSense::GreaterEqual, 2.0);
    clash.add_row("le", {{z, 1.0}}, RowSense::LessEqual, 1.0);
    const MilpSolution c = solve_milp(clash);
    CHECK(c.status == MilpStatus::Infeasible);
    CHECK_FALSE(c.has_incumbent);
    CHECK_FALSE(c.infeasible_rows.empty());

    MilpProblem open("open");
    const auto w = open.add_column("w", 0.0, kInfinity, -1.0);
    open.add_row("c", {{w, 1.0}}, RowSense::GreaterEqual, 0.0);
    CHECK(solve_milp(open).status == MilpStatus::Unbounded);
  }

  TEST_CASE("objective constant is reported") {
    MilpProblem p("constant");
    const auto x = p.add_column("x", 1.0, 2.0, 3.0);
    (void)x;
    p.set_objective_constant(10.0);
    CHECK(solve_lp(p, false).objective == doctest::Approx(13.0));
  }

  TEST_CASE("malformed problems are rejected") {
    MilpProblem p("bad");
    p.add_column("x", 2.0, 1.0);
    CHECK_THROWS_AS(solve_milp(p), std::invalid_argument);
    MilpProblem q("nan");
    q.add_column("x", 0.0, 1.0, std::nan(""));
    CHECK_THROWS_AS(solve_milp(q), std::invalid_argument);
    MilpProblem r("unfixed");
    r.add_binary("b");
    CHECK_THROWS_AS(solve_lp(r, false), std::invalid_argument);
  }

  TEST_CASE("knapsack optimum and node limit") {
    const MilpSolution full = solve_milp(knapsack());
    REQUIRE(full.status == MilpStatus::Optimal);
    CHECK(full.objective == doctest::Approx(-12.0));
    CHECK(full.values == std::vector<double>{1.0, 0.0, 1.0});
    CHECK(full.node_count > 1);

    MilpConfig tight;
    tight.node_limit = 0;
    const MilpSolution limited = solve_milp(knapsack(), tight);
    CHECK(limited.status == MilpStatus::LimitReached);
    CHECK(limited.node_count == 1);
    CHECK(limited.best_bound <= full.objective + 1e-9);
    if (limited.has_incumbent) {
      CHECK(limited.best_bound <= limited.objective);
      CHECK(limited.gap >= 0.0);
    }
  }

  TEST_CASE("incumbents only improve") {
    const CommunitySpec spec = synthetic_community({.days = 1, .seed = 5, .noise = 0.2});
    const auto model = build_model(spec, Objective::Price, SharingStrategy::OptimizeHourlyAllocation);
    const MilpSolution sol = solve_milp(model.problem);
    REQUIRE(sol.status == MilpStatus::Optimal);
    REQUIRE_FALSE(sol.incumbent_history.empty());
    for (std::size_t i = 1; i < sol.incumbent_history.size(); ++i) {
      CHECK(sol.incumbent_history[i] < sol.incumbent_history[i - 1]);
    }
    CHECK(sol.incumbent_history.back() == sol.objective);
    CHECK(verify_solution(model.problem, sol.values).empty());
  }

  TEST_CASE("solving twice gives identical results") {
    const CommunitySpec spec = synthetic_community({.days = 1, .seed = 6, .noise = 0.2});
    const auto model = build_model(spec, Objective::Environment, SharingStrategy::OptimizeHourlyAllocation);
    const MilpSolution a = solve_milp(model.problem);
    const MilpSolution b = solve_milp(model.problem);
    CHECK(a.values == b.values);
    CHECK(a.objective == b.objective);
    CHECK(a.node_count == b.node_count);
  }

  TEST_CASE("a battery that cannot move means no branching") {
    CommunitySpec spec = flat_community(6, 2);
    spec.bess.soc_min_kwh = spec.bess.soc_max_kwh = 150.0;
    const auto model = build_model(spec, Objective::Price, SharingStrategy::FixedCoefficients);
    const MilpSolution sol = solve_milp(model.problem);
    REQUIRE(sol.status == MilpStatus::Optimal);
    CHECK(sol.solved_at_root);
    CHECK(sol.node_count == 1);
    CHECK(sol.objective == doctest::Approx(6 * 2 * 0.2));
  }

  TEST_CASE("weak duality and zero gap on random LPs") {
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 60; ++trial) {
      const MilpProblem p = random_lp(rng);
      const LpSolution primal = solve_lp(p, false);
      REQUIRE(primal.status == LpStatus::Optimal);
      CHECK(verify_solution(p, primal.values).empty());
      const double dual = dual_objective(p);
      CHECK(dual <= primal.objective + 1e-6 * std::max(1.0, std::abs(primal.objective)));
      CHECK(primal.objective - dual <= 1e-6 * std::max(1.0, std::abs(primal.objective)));
      CHECK(std::abs(primal.dual_bound - primal.objective) <=
            1e-6 * std::max(1.0, std::abs(primal.objective)));
    }
  }

  TEST_CASE("verifier catches exclusivity and dynamics violations") {
    const CommunitySpec spec = flat_community(3, 1);
    const auto model = build_model(spec, Objective::Price, SharingStrategy::FixedCoefficients);
    const MilpSolution sol = solve_milp(model.problem);
    REQUIRE(sol.status == MilpStatus::Optimal);
    CHECK(verify_solution(model.problem, sol.values).empty());

    auto both = sol.values;
    both[model.index.at(VarKind::DeltaBuy, 1, 0)] = 1.0;
    both[model.index.at(VarKind::DeltaSell, 1, 0)] = 1.0;
    const auto report = verify_solution(model.problem, both);
    CHECK(report.mentions("trade_excl_1_0"));

    auto drift = sol.values;
    drift[model.index.at(VarKind::Soc, 1)] += 1e-3;
    CHECK(verify_solution(model.problem, drift).mentions("soc_dyn_1"));

    auto fractional = sol.values;
    fractional[model.index.at(VarKind::DeltaCh, 0)] = 0.5;
    CHECK_FALSE(verify_solution(model.problem, fractional).empty());

    CHECK_FALSE(verify_solution(model.problem, std::vector<double>(3, 0.0)).empty());
  }

  TEST_CASE("solution text reader") {
    MilpProblem p("read");
    p.add_column("x", 0.0, 10.0);
    p.add_binary("b");
    std::istringstream good("# Columns 2\nx 2.5\nb 1\n# Rows 0\nx 9\n");
    CHECK(read_solution_text(good, p) == std::vector<double>{2.5, 1.0});
    std::istringstream missing("x 1\n");
    CHECK_THROWS_AS(read_solution_text(missing, p), std::runtime_error);
    std::istringstream garbled("x abc\nb 0\n");
    CHECK_THROWS_AS(read_solution_text(garbled, p), std::runtime_error);
  }
}
