#pragma once

// Community data types. All quantities are per hour: with a one-hour step,
// kW limits and kWh-per-hour flows are numerically the same thing.

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lecopt/series.hpp"

namespace lecopt {

inline constexpr std::size_t kTariffPeriods = 6;

/// Contracted power per tariff period (Spanish 3.0TD has six).
using PeriodLimits = std::array<double, kTariffPeriods>;

/// Placeholder PV life-cycle factor. Not a published figure: users are
/// expected to override it with a value for their installation.
inline constexpr double kDefaultPvEmissionFactor = 0.045;

/// Life-cycle factor applied to battery discharge, kg CO2-eq/kWh.
inline constexpr double kBatteryEmissionFactor = 0.060;

struct Participant {
  std::string id;
  HourlySeries load_kwh;
  HourlySeries buy_price;   // EUR/kWh, tax inclusive
  HourlySeries sell_price;  // EUR/kWh
  PeriodLimits max_import_kw{};
  PeriodLimits max_export_kw{};
  // Tariff period (1..6) for each hour of the horizon. Empty means period 1.
  std::vector<std::uint8_t> tariff_period;

  std::size_t period_index(std::size_t hour) const {
    return tariff_period.empty() ? 0 : static_cast<std::size_t>(tariff_period[hour]) - 1;
  }
  double import_limit(std::size_t hour) const { return max_import_kw[period_index(hour)]; }
  double export_limit(std::size_t hour) const { return max_export_kw[period_index(hour)]; }
};

struct BessSpec {
  double p_ch_max_kw = 0.0;
  double p_dis_max_kw = 0.0;
  double soc_max_kwh = 0.0;
  double soc_min_kwh = 0.0;
  double eta_ch = 1.0;
  double eta_dis = 1.0;
  double soc_initial_kwh = 0.0;
  double soc_final_kwh = 0.0;
  double calendar_cost_per_hour = 0.0;   // EUR/h
  double throughput_cost_per_kwh = 0.0;  // EUR per kWh charged or discharged
  double emission_factor_discharge = kBatteryEmissionFactor;

  /// 90 kW / 189.9 kWh Li-ion unit of the four-building case study.
  static BessSpec case_study();
};

struct PvSpec {
  HourlySeries generation_kwh;
  double emission_factor = kDefaultPvEmissionFactor;
};

enum class SharingMode { Static, HourlyVariable };

struct SharingScheme {
  SharingMode mode = SharingMode::Static;
  std::vector<double> static_coefficients;  // one per participant
  // HourlyVariable only: externally fixed hourly coefficients, one series
  // per participant. Absent when the allocation is left to the optimizer.
  std::optional<std::vector<HourlySeries>> variable_coefficients;
};

struct CommunitySpec {
  std::string name;
  std::vector<Participant> participants;
  BessSpec bess;
  PvSpec pv;
  SharingScheme sharing;
  HourlySeries grid_intensity;  // kg CO2-eq/kWh
  double vat_rate = 0.0;
  std::size_t horizon_hours = 0;
  bool compensation_cap_enabled = false;
  bool allow_negative_prices = false;

  /// Fixed sharing coefficient for (hour, participant): the hourly series
  /// when one is supplied, otherwise the static coefficient.
  double coefficient(std::size_t hour, std::size_t participant) const;

  /// Copy restricted to hours [first, first + count).
  CommunitySpec window(std::size_t first, std::size_t count) const;

  Timestamp start() const { return grid_intensity.start(); }
};

struct Violation {
  std::string path;
  std::string message;
  friend bool operator==(const Violation&, const Violation&) = default;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool empty() const { return violations.empty(); }
  bool contains(std::string_view message_fragment) const;
  std::string to_string() const;
  friend bool operator==(const ValidationReport&, const ValidationReport&) = default;
};

/// Checks every invariant of the community data. Never throws; an empty
/// report means the spec can be handed to build_model.
ValidationReport validate_community(const CommunitySpec& spec);

}  // namespace lecopt
