#pragma once

// Baseline, scenario runs and per-participant settlement.

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lecopt/domain.hpp"
#include "lecopt/model.hpp"
#include "lecopt/solver.hpp"

namespace lecopt {

struct ParticipantTotals {
  std::string id;
  double cost_eur = 0.0;
  double emissions_kg = 0.0;
  friend bool operator==(const ParticipantTotals&, const ParticipantTotals&) = default;
};

struct BaselineResult {
  std::vector<ParticipantTotals> participants;
  ParticipantTotals community;  // id "LEC"
  friend bool operator==(const BaselineResult&, const BaselineResult&) = default;
};

/// Every participant buys its whole load from the grid: no PV, no battery.
BaselineResult compute_baseline(const CommunitySpec& spec);

/// Community-level and per-participant values for one hour of a solved
/// schedule. Shaped for the price/battery/consumption/generation plots.
struct HourTrace {
  Timestamp timestamp{};
  double price_buy = 0.0;   // mean over participants, EUR/kWh
  double price_sell = 0.0;  // mean over participants, EUR/kWh
  double gwp_grid = 0.0;    // kg CO2-eq/kWh
  double soc = 0.0;
  double charge = 0.0;
  double discharge = 0.0;
  double baseline_load = 0.0;  // sum of participant loads
  double lec_load = 0.0;       // sum of grid imports
  double pv = 0.0;
  double sold = 0.0;            // sum of grid exports
  double net_generation = 0.0;  // pv + discharge - charge
  std::vector<double> buy;
  std::vector<double> sell;
  std::vector<double> allocation;  // net generation attributed per participant
  std::vector<double> beta;        // sharing coefficients in effect
  friend bool operator==(const HourTrace&, const HourTrace&) = default;
};

struct SettlementReport {
  std::string label;
  Objective objective = Objective::Price;
  SharingStrategy sharing = SharingStrategy::FixedCoefficients;
  std::vector<ParticipantTotals> participants;
  ParticipantTotals community;  // id "LEC"
  double objective_value = 0.0;  // sum of window objectives (EUR or kg)
  std::size_t windows = 0;
  std::size_t nodes = 0;
  bool proven_optimal = true;
  std::vector<HourTrace> traces;
  friend bool operator==(const SettlementReport&, const SettlementReport&) = default;
};

struct ScenarioOptions {
  std::size_t window_hours = 24;
  MilpConfig solver;
  double verify_tolerance = kVerifyTolerance;
  std::size_t workers = 1;
};

/// No feasible schedule for one optimization window.
class ScenarioInfeasible : public std::runtime_error {
 public:
  ScenarioInfeasible(std::string label, std::size_t window, std::vector<std::string> families);
  const std::vector<std::string>& families() const { return families_; }
  std::size_t window() const { return window_; }

 private:
  std::vector<std::string> families_;
  std::size_t window_;
};

/// Row family of a generated row name: "balance_3_1" -> "balance".
std::string row_family(std::string_view row_name);

/// Settles one solved window: costs, emissions and hourly traces.
SettlementReport settle(const CommunityModel& model, const CommunitySpec& spec,
                        const std::vector<double>& values);

/// Splits the horizon into independent windows (24 h by default, each with
/// the same SOC start/end rule), builds, solves, verifies and settles them.
SettlementReport run_scenario(const CommunitySpec& spec, Objective objective,
                              SharingStrategy sharing, const ScenarioOptions& options = {});

struct ScenarioChoice {
  Objective objective;
  SharingStrategy sharing;
};

/// All requested scenarios; windows of all scenarios share one worker pool
/// and results come back in request order.
std::vector<SettlementReport> run_scenarios(const CommunitySpec& spec,
                                            const std::vector<ScenarioChoice>& choices,
                                            const ScenarioOptions& options = {});

/// Signed change in percent, or nullopt when the baseline is zero.
std::optional<double> percent_change(double value, double baseline);

struct DeltaRow {
  std::string id;
  double baseline_cost_eur = 0.0;
  double cost_eur = 0.0;
  std::optional<double> cost_change_pct;
  double baseline_emissions_kg = 0.0;
  double emissions_kg = 0.0;
  std::optional<double> emissions_change_pct;
  friend bool operator==(const DeltaRow&, const DeltaRow&) = default;
};

struct DeltaReport {
  std::string label;
  std::vector<DeltaRow> participants;
  DeltaRow community;
  friend bool operator==(const DeltaReport&, const DeltaReport&) = default;
};

/// Throws std::invalid_argument when participant ids differ.
DeltaReport compare(const SettlementReport& report, const BaselineResult& baseline);

}  // namespace lecopt
