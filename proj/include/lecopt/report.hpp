#pragma once

// Serialization of baseline, settlement and comparison results.
//
// JSON carries full double precision (re-reading gives equal values). CSV
// and text tables use fixed decimals: 2 for EUR and t CO2-eq, 1 for percent.

#include <iosfwd>
#include <optional>
#include <string>

#include <json.hpp>

#include "lecopt/scenario.hpp"

namespace lecopt {

inline constexpr const char* kUndefinedMarker = "n/a";

/// Locale-independent fixed-point text; never prints "-0.00".
std::string format_fixed(double value, int decimals);
/// format_fixed with a space between thousands groups: "50 136.45".
std::string format_grouped(double value, int decimals);
/// "-22.9", or kUndefinedMarker.
std::string format_percent(const std::optional<double>& pct);
/// Arrow form used in the result tables: "↓ 22.9%", "↑ 20.4%", "0.0%".
std::string format_arrow_percent(const std::optional<double>& pct);

nlohmann::json to_json(const BaselineResult& baseline);
nlohmann::json to_json(const SettlementReport& report);
nlohmann::json to_json(const DeltaReport& delta);

BaselineResult baseline_from_json(const nlohmann::json& j);
SettlementReport settlement_from_json(const nlohmann::json& j);
DeltaReport delta_from_json(const nlohmann::json& j);

/// building,total_cost_eur,total_ghg_t  (participants, then the LEC row)
void write_baseline_csv(std::ostream& out, const BaselineResult& baseline);
/// building,total_cost_eur,cost_vs_baseline_pct,total_ghg_t,ghg_vs_baseline_pct
void write_delta_csv(std::ostream& out, const DeltaReport& delta);
/// One row per hour with the columns of the four plot panels.
void write_trace_csv(std::ostream& out, const SettlementReport& report);
/// building,hour,ts,buy,sell,allocation,beta for every participant and hour.
void write_participant_trace_csv(std::ostream& out, const SettlementReport& report);

/// Aligned plain-text table in the layout of the result tables.
std::string format_baseline_table(const BaselineResult& baseline);
std::string format_delta_table(const DeltaReport& delta);

}  // namespace lecopt
