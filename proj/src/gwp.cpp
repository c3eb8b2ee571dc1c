#include "lecopt/gwp.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "lecopt/domain.hpp"

namespace lecopt {

namespace {

const std::map<std::string, std::string>& aliases() {
  static const std::map<std::string, std::string> table = {
      {"coal", "hard coal"},
      {"combined cycle", "natural gas"},
      {"gas", "natural gas"},
      {"hydro-power", "hydro"},
      {"hydro power", "hydro"},
      {"hydropower", "hydro"},
      {"solar", "solar pv"},
      {"photovoltaic", "solar pv"},
      {"pv", "solar pv"},
  };
  return table;
}

struct Covered {
  double weighted = 0.0;
  double covered = 0.0;
  double total = 0.0;
};

Covered accumulate(const GenerationMixHour& mix, const EmissionFactorTable& factors) {
  Covered acc;
  for (const auto& [source, energy] : mix.energy_mwh) {
    if (energy < 0.0) {
      throw std::invalid_argument("negative generation for source " + source + " at " +
                                  format_timestamp(mix.timestamp));
    }
    acc.total += energy;
    if (auto factor = factors.find(source)) {
      acc.weighted += energy * *factor;
      acc.covered += energy;
    }
  }
  return acc;
}

}  // namespace

std::string normalize_source_name(std::string_view name) {
  std::string out;
  out.reserve(name.size());
  bool pending_space = false;
  for (char ch : name) {
    auto c = static_cast<unsigned char>(ch);
    if (c == '_' || std::isspace(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(static_cast<char>(std::tolower(c)));
  }
  if (auto it = aliases().find(out); it != aliases().end()) return it->second;
  return out;
}

EmissionFactorTable EmissionFactorTable::defaults() {
  EmissionFactorTable table;
  table.set("hard coal", {0.855, 0.660, 1.05});
  table.set("lignite", {1.05, 0.800, 1.30});
  table.set("natural gas", {0.690, 0.38, 1.0});
  table.set("nuclear", {0.019, 0.003, 0.035});
  table.set("biomass", {0.069, 0.008, 0.130});
  table.set("hydro", {0.011, 0.002, 0.02});
  table.set("wind", {0.022, 0.003, 0.041});
  table.set("battery", {kBatteryEmissionFactor, std::nullopt, std::nullopt});
  table.set("solar pv", {kDefaultPvEmissionFactor, std::nullopt, std::nullopt});
  return table;
}

void EmissionFactorTable::set(std::string_view source, EmissionFactor factor) {
  if (!(factor.average >= 0.0)) {
    throw std::invalid_argument("emission factor for " + std::string(source) +
                                " must be non-negative");
  }
  factors_[normalize_source_name(source)] = factor;
}

std::optional<double> EmissionFactorTable::find(std::string_view source) const {
  auto it = factors_.find(normalize_source_name(source));
  if (it == factors_.end()) return std::nullopt;
  return it->second.average;
}

ZeroCoveredGeneration::ZeroCoveredGeneration(std::optional<Timestamp> when)
    : std::runtime_error(when ? "no covered generation at " + format_timestamp(*when)
                              : std::string("no covered generation")),
      when_(when) {}

double hourly_intensity(const GenerationMixHour& mix, const EmissionFactorTable& factors) {
  const Covered acc = accumulate(mix, factors);
  if (!(acc.covered > 0.0)) throw ZeroCoveredGeneration(mix.timestamp);
  return acc.weighted / acc.covered;
}

HourlySeries intensity_series(const std::vector<GenerationMixHour>& mix_hours,
                              const EmissionFactorTable& factors) {
  if (mix_hours.empty()) return {};
  std::vector<double> values;
  values.reserve(mix_hours.size());
  for (std::size_t i = 0; i < mix_hours.size(); ++i) {
    if (i > 0 && mix_hours[i].timestamp != mix_hours[i - 1].timestamp + kHour) {
      throw std::invalid_argument("generation mix not strictly hourly at " +
                                  format_timestamp(mix_hours[i].timestamp));
    }
    values.push_back(hourly_intensity(mix_hours[i], factors));
  }
  return HourlySeries(mix_hours.front().timestamp, std::move(values));
}

double coverage_ratio(const GenerationMixHour& mix, const EmissionFactorTable& factors) {
  const Covered acc = accumulate(mix, factors);
  if (!(acc.total > 0.0)) {
    throw std::invalid_argument("generation mix at " + format_timestamp(mix.timestamp) +
                                " has zero total energy");
  }
  return acc.covered / acc.total;
}

std::vector<CoverageWarning> low_coverage_hours(const std::vector<GenerationMixHour>& mix_hours,
                                                const EmissionFactorTable& factors,
                                                double threshold) {
  std::vector<CoverageWarning> out;
  for (const auto& hour : mix_hours) {
    const double ratio = coverage_ratio(hour, factors);
    if (ratio < threshold) out.push_back({hour.timestamp, ratio});
  }
  return out;
}

std::vector<std::string> unmapped_sources(const std::vector<GenerationMixHour>& mix_hours,
                                          const EmissionFactorTable& factors) {
  std::set<std::string> missing;
  for (const auto& hour : mix_hours) {
    for (const auto& entry : hour.energy_mwh) {
      if (!factors.find(entry.first)) missing.insert(entry.first);
    }
  }
  return {missing.begin(), missing.end()};
}

}  // namespace lecopt
