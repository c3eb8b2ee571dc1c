#include "lecopt/scenario.hpp"

#include <atomic>
#include <cctype>
#include <exception>
#include <set>
#include <thread>

namespace lecopt {

namespace {

constexpr const char* kCommunityId = "LEC";

void add_community_totals(std::vector<ParticipantTotals>& parts, ParticipantTotals& community) {
  community = {kCommunityId, 0.0, 0.0};
  for (const auto& p : parts) {
    community.cost_eur += p.cost_eur;
    community.emissions_kg += p.emissions_kg;
  }
}

struct WindowTask {
  std::size_t scenario;
  std::size_t window;
  std::size_t first_hour;
  std::size_t hours;
};

struct WindowResult {
  SettlementReport report;
  std::size_t nodes = 0;
  bool optimal = true;
};

WindowResult solve_window(const CommunitySpec& window, Objective objective, SharingStrategy sharing,
                          const ScenarioOptions& options, std::size_t window_index) {
  const CommunityModel model = build_model(window, objective, sharing);
  const MilpSolution solution = solve_milp(model.problem, options.solver);
  if (solution.status == MilpStatus::Infeasible || !solution.has_incumbent) {
    std::set<std::string> families;
    for (std::size_t row : solution.infeasible_rows) {
      families.insert(row_family(model.problem.row(row).name));
    }
    throw ScenarioInfeasible(model.problem.label(), window_index,
                             {families.begin(), families.end()});
  }
  const auto violations = verify_solution(model.problem, solution.values, options.verify_tolerance);
  if (!violations.empty()) {
    throw std::runtime_error("solution for " + model.problem.label() + " window " +
                             std::to_string(window_index) + " failed verification:\n" +
                             violations.to_string());
  }
  WindowResult result;
  result.report = settle(model, window, solution.values);
  result.report.objective_value = solution.objective;
  result.nodes = solution.node_count;
  result.optimal = solution.status == MilpStatus::Optimal;
  return result;
}

}  // namespace

ScenarioInfeasible::ScenarioInfeasible(std::string label, std::size_t window,
                                       std::vector<std::string> families)
    : std::runtime_error([&] {
        std::string msg = "scenario " + label + " infeasible in window " + std::to_string(window);
        if (!families.empty()) {
          msg += "; constraint families without a feasible point:";
          for (const auto& f : families) msg += " " + f;
        }
        return msg;
      }()),
      families_(std::move(families)),
      window_(window) {}

std::string row_family(std::string_view name) {
  while (!name.empty()) {
    const auto pos = name.rfind('_');
    if (pos == std::string_view::npos) break;
    const auto tail = name.substr(pos + 1);
    bool digits = !tail.empty();
    for (char c : tail) digits = digits && std::isdigit(static_cast<unsigned char>(c));
    if (!digits) break;
    name = name.substr(0, pos);
  }
  return std::string(name);
}

BaselineResult compute_baseline(const CommunitySpec& spec) {
  BaselineResult result;
  for (const auto& p : spec.participants) {
    ParticipantTotals totals{p.id, 0.0, 0.0};
    for (std::size_t t = 0; t < p.load_kwh.size(); ++t) {
      totals.cost_eur += p.buy_price[t] * p.load_kwh[t];
      totals.emissions_kg += spec.grid_intensity[t] * p.load_kwh[t];
    }
    result.participants.push_back(std::move(totals));
  }
  add_community_totals(result.participants, result.community);
  return result;
}

SettlementReport settle(const CommunityModel& model, const CommunitySpec& spec,
                        const std::vector<double>& values) {
  const auto& index = model.index;
  const std::size_t parts = spec.participants.size();
  const auto beta = effective_coefficients(model, spec, values);
  const auto allocation = allocated_generation(model, spec, values);
  const auto theta = net_generation(model, spec, values);
  const BessSpec& bess = spec.bess;

  SettlementReport report;
  report.label = model.problem.label();
  report.objective = model.objective;
  report.sharing = model.sharing;
  report.windows = 1;
  for (const auto& p : spec.participants) report.participants.push_back({p.id, 0.0, 0.0});

  for (std::size_t t = 0; t < model.hours; ++t) {
    const double ch = values[index.at(VarKind::SigmaCh, t)];
    const double dis = values[index.at(VarKind::SigmaDis, t)];
    const double battery_cost = bess.calendar_cost_per_hour + bess.throughput_cost_per_kwh * (ch + dis);
    const double shared_emissions =
        spec.pv.emission_factor * spec.pv.generation_kwh[t] + bess.emission_factor_discharge * dis;

    HourTrace trace;
    trace.timestamp = spec.grid_intensity.timestamp(t);
    trace.gwp_grid = spec.grid_intensity[t];
    trace.soc = values[index.at(VarKind::Soc, t)];
    trace.charge = ch;
    trace.discharge = dis;
    trace.pv = spec.pv.generation_kwh[t];
    trace.net_generation = theta[t];
    trace.allocation = allocation[t];
    trace.beta = beta[t];
    for (std::size_t p = 0; p < parts; ++p) {
      const Participant& part = spec.participants[p];
      const double buy = values[index.at(VarKind::ChiBuy, t, p)];
      const double sell = values[index.at(VarKind::ChiSell, t, p)];
      auto& totals = report.participants[p];
      totals.cost_eur += part.buy_price[t] * buy - part.sell_price[t] * sell + beta[t][p] * battery_cost;
      totals.emissions_kg += spec.grid_intensity[t] * buy + beta[t][p] * shared_emissions;

      trace.buy.push_back(buy);
      trace.sell.push_back(sell);
      trace.price_buy += part.buy_price[t] / static_cast<double>(parts);
      trace.price_sell += part.sell_price[t] / static_cast<double>(parts);
      trace.baseline_load += part.load_kwh[t];
      trace.lec_load += buy;
      trace.sold += sell;
    }
    report.traces.push_back(std::move(trace));
  }
  add_community_totals(report.participants, report.community);
  return report;
}

std::vector<SettlementReport> run_scenarios(const CommunitySpec& spec,
                                            const std::vector<ScenarioChoice>& choices,
                                            const ScenarioOptions& options) {
  if (auto report = validate_community(spec); !report.empty()) {
    throw InvalidCommunity(std::move(report));
  }
  if (options.window_hours == 0) throw std::invalid_argument("window length must be positive");

  std::vector<WindowTask> tasks;
  std::size_t windows = 0;
  for (std::size_t first = 0; first < spec.horizon_hours; first += options.window_hours) {
    ++windows;
  }
  for (std::size_t s = 0; s < choices.size(); ++s) {
    std::size_t w = 0;
    for (std::size_t first = 0; first < spec.horizon_hours; first += options.window_hours, ++w) {
      tasks.push_back({s, w, first, std::min(options.window_hours, spec.horizon_hours - first)});
    }
  }

  std::vector<WindowResult> results(tasks.size());
  std::vector<std::exception_ptr> errors(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      const auto& task = tasks[i];
      try {
        results[i] = solve_window(spec.window(task.first_hour, task.hours),
                                  choices[task.scenario].objective, choices[task.scenario].sharing,
                                  options, task.window);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t workers = std::max<std::size_t>(1, std::min(options.workers, tasks.size()));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t k = 0; k < workers; ++k) pool.emplace_back(worker);
    for (auto& thread : pool) thread.join();
  }
  for (const auto& error : errors) {
    if (error) std::rethrow_exception(error);
  }

  // Merge windows in (scenario, window) order.
  std::vector<SettlementReport> reports;
  for (std::size_t s = 0; s < choices.size(); ++s) {
    SettlementReport merged;
    merged.label = scenario_label(choices[s].objective, choices[s].sharing);
    merged.objective = choices[s].objective;
    merged.sharing = choices[s].sharing;
    for (const auto& p : spec.participants) merged.participants.push_back({p.id, 0.0, 0.0});
    for (std::size_t w = 0; w < windows; ++w) {
      const WindowResult& r = results[s * windows + w];
      for (std::size_t p = 0; p < merged.participants.size(); ++p) {
        merged.participants[p].cost_eur += r.report.participants[p].cost_eur;
        merged.participants[p].emissions_kg += r.report.participants[p].emissions_kg;
      }
      merged.objective_value += r.report.objective_value;
      merged.nodes += r.nodes;
      merged.proven_optimal = merged.proven_optimal && r.optimal;
      merged.traces.insert(merged.traces.end(), r.report.traces.begin(), r.report.traces.end());
    }
    merged.windows = windows;
    add_community_totals(merged.participants, merged.community);
    reports.push_back(std::move(merged));
  }
  return reports;
}

SettlementReport run_scenario(const CommunitySpec& spec, Objective objective,
                              SharingStrategy sharing, const ScenarioOptions& options) {
  return std::move(run_scenarios(spec, {{objective, sharing}}, options).front());
}

std::optional<double> percent_change(double value, double baseline) {
  if (baseline == 0.0) return std::nullopt;
  return (value - baseline) / baseline * 100.0;
}

DeltaReport compare(const SettlementReport& report, const BaselineResult& baseline) {
  if (report.participants.size() != baseline.participants.size()) {
    throw std::invalid_argument("report and baseline cover different participants");
  }
  auto row = [](const ParticipantTotals& optimized, const ParticipantTotals& base) {
    DeltaRow r;
    r.id = optimized.id;
    r.baseline_cost_eur = base.cost_eur;
    r.cost_eur = optimized.cost_eur;
    r.cost_change_pct = percent_change(optimized.cost_eur, base.cost_eur);
    r.baseline_emissions_kg = base.emissions_kg;
    r.emissions_kg = optimized.emissions_kg;
    r.emissions_change_pct = percent_change(optimized.emissions_kg, base.emissions_kg);
    return r;
  };
  DeltaReport out;
  out.label = report.label;
  for (std::size_t p = 0; p < report.participants.size(); ++p) {
    if (report.participants[p].id != baseline.participants[p].id) {
      throw std::invalid_argument("participant " + report.participants[p].id +
                                  " does not match baseline participant " +
                                  baseline.participants[p].id);
    }
    out.participants.push_back(row(report.participants[p], baseline.participants[p]));
  }
  out.community = row(report.community, baseline.community);
  return out;
}

}  // namespace lecopt
