#pragma once

// Hourly grid carbon intensity from the scheduled generation mix.

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "lecopt/series.hpp"

namespace lecopt {

struct EmissionFactor {
  double average = 0.0;  // kg CO2-eq/kWh, the value used in calculations
  std::optional<double> range_low;
  std::optional<double> range_high;
};

/// Life-cycle emission factors keyed by normalized source name.
class EmissionFactorTable {
 public:
  EmissionFactorTable() = default;

  /// Life-cycle averages for the main generation technologies, plus the
  /// battery and a placeholder solar PV entry (see kDefaultPvEmissionFactor).
  static EmissionFactorTable defaults();

  void set(std::string_view source, EmissionFactor factor);
  void set(std::string_view source, double average) {
    set(source, EmissionFactor{average, std::nullopt, std::nullopt});
  }

  /// Lookup after normalization and alias resolution.
  std::optional<double> find(std::string_view source) const;

  bool empty() const { return factors_.empty(); }
  const std::map<std::string, EmissionFactor>& entries() const { return factors_; }

 private:
  std::map<std::string, EmissionFactor> factors_;
};

/// Lower-cased, trimmed, underscores as spaces, known aliases resolved
/// ("combined cycle" -> "natural gas", "hydro-power" -> "hydro", ...).
std::string normalize_source_name(std::string_view name);

struct GenerationMixHour {
  Timestamp timestamp{};
  std::map<std::string, double> energy_mwh;  // by source name
};

class ZeroCoveredGeneration : public std::runtime_error {
 public:
  explicit ZeroCoveredGeneration(std::optional<Timestamp> when);
  std::optional<Timestamp> when() const { return when_; }

 private:
  std::optional<Timestamp> when_;
};

/// Generation-weighted mean factor over the sources present in both the mix
/// and the table. Sources missing from the table are left out of the
/// numerator and the denominator alike.
double hourly_intensity(const GenerationMixHour& mix, const EmissionFactorTable& factors);

/// hourly_intensity applied to consecutive hours. Throws std::invalid_argument
/// unless timestamps advance by exactly one hour.
HourlySeries intensity_series(const std::vector<GenerationMixHour>& mix_hours,
                              const EmissionFactorTable& factors);

/// Share of the hour's total generation covered by the table.
double coverage_ratio(const GenerationMixHour& mix, const EmissionFactorTable& factors);

inline constexpr double kDefaultCoverageThreshold = 0.90;

struct CoverageWarning {
  Timestamp timestamp{};
  double coverage = 0.0;
};

std::vector<CoverageWarning> low_coverage_hours(const std::vector<GenerationMixHour>& mix_hours,
                                                const EmissionFactorTable& factors,
                                                double threshold = kDefaultCoverageThreshold);

/// Sources that appear in the mix but have no factor, in name order.
std::vector<std::string> unmapped_sources(const std::vector<GenerationMixHour>& mix_hours,
                                          const EmissionFactorTable& factors);

}  // namespace lecopt
