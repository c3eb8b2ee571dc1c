#pragma once

// CSV and config ingestion. Every CSV has a header row and an ISO-8601
// timestamp column; numbers use a dot decimal regardless of locale.

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lecopt/domain.hpp"
#include "lecopt/gwp.hpp"
#include "lecopt/series.hpp"

namespace lecopt {

class IngestError : public std::runtime_error {
 public:
  IngestError(std::filesystem::path path, const std::string& message);
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

class MissingColumn : public IngestError {
 public:
  MissingColumn(std::filesystem::path path, std::string column);
  const std::string& column() const { return column_; }

 private:
  std::string column_;
};

/// Timestamps are not strictly hourly and increasing. `when` names the
/// first missing (or duplicated) hour; it is empty for a file without rows.
class GapInSeries : public IngestError {
 public:
  GapInSeries(std::filesystem::path path, std::optional<Timestamp> when, const std::string& detail);
  std::optional<Timestamp> when() const { return when_; }

 private:
  std::optional<Timestamp> when_;
};

/// `row` is the 1-based line number, `column` the header name.
class NonNumericCell : public IngestError {
 public:
  NonNumericCell(std::filesystem::path path, std::size_t row, std::string column, std::string cell);
  std::size_t row() const { return row_; }
  const std::string& column() const { return column_; }

 private:
  std::size_t row_;
  std::string column_;
};

struct ColumnSpec {
  std::string timestamp = "ts";
  std::string value;
};

/// Strict dot-decimal parse of a whole cell; nullopt otherwise.
std::optional<double> parse_number(std::string_view cell);

HourlySeries load_series_csv(const std::filesystem::path& path, const ColumnSpec& columns);

/// Several value columns sharing one timestamp column.
std::map<std::string, HourlySeries> load_columns_csv(const std::filesystem::path& path,
                                                     const std::string& timestamp_column,
                                                     const std::vector<std::string>& value_columns);

/// Wide format: timestamp column plus one column per generation source.
/// Source names are normalized; empty cells count as zero.
std::vector<GenerationMixHour> load_mix_csv(const std::filesystem::path& path,
                                            const std::string& timestamp_column = "ts");

/// "source,factor" rows applied on top of `base`.
EmissionFactorTable load_factor_overrides(const std::filesystem::path& path,
                                          EmissionFactorTable base = EmissionFactorTable::defaults());

/// Command-line values that take precedence over the config file.
struct ConfigOverrides {
  std::optional<double> vat_rate;
  std::optional<std::filesystem::path> factors_file;
  std::optional<double> calendar_cost_per_hour;
  std::optional<double> throughput_cost_per_kwh;
  bool compensation_cap = false;  // only ever switches the cap on
};

struct LoadedConfig {
  CommunitySpec spec;
  EmissionFactorTable factors;
  std::size_t window_hours = 24;
  std::vector<GenerationMixHour> mix;  // empty when intensity came from a series
  std::vector<CoverageWarning> coverage_warnings;
  std::vector<std::string> unmapped_sources;
};

/// Reads the JSON run configuration. Relative file paths resolve against the
/// config file's directory. Raw buy prices are made VAT-inclusive here.
LoadedConfig load_config(const std::filesystem::path& path, const ConfigOverrides& overrides = {});

}  // namespace lecopt
