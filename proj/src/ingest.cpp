#include "lecopt/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>

#include <json.hpp>

namespace lecopt {

namespace fs = std::filesystem;
using nlohmann::json;

IngestError::IngestError(fs::path path, const std::string& message)
    : std::runtime_error(path.string() + ": " + message), path_(std::move(path)) {}

MissingColumn::MissingColumn(fs::path path, std::string column)
    : IngestError(std::move(path), "missing column '" + column + "'"), column_(std::move(column)) {}

GapInSeries::GapInSeries(fs::path path, std::optional<Timestamp> when, const std::string& detail)
    : IngestError(std::move(path), detail), when_(when) {}

NonNumericCell::NonNumericCell(fs::path path, std::size_t row, std::string column, std::string cell)
    : IngestError(std::move(path), "line " + std::to_string(row) + ", column '" + column +
                                       "': not a number: '" + cell + "'"),
      row_(row),
      column_(std::move(column)) {}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> cells;
  std::string cell;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cell += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cell += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      cells.emplace_back(trim(cell));
      cell.clear();
    } else {
      cell += c;
    }
  }
  cells.emplace_back(trim(cell));
  return cells;
}

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> line_numbers;  // 1-based, per row

  std::size_t column(const fs::path& path, const std::string& name) const {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw MissingColumn(path, name);
    return static_cast<std::size_t>(it - header.begin());
  }
};

CsvTable read_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IngestError(path, "cannot open file");
  CsvTable table;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (trim(line).empty()) continue;
    auto cells = split_csv_line(line);
    if (table.header.empty()) {
      if (!cells.empty() && cells[0].rfind("\xEF\xBB\xBF", 0) == 0) cells[0].erase(0, 3);
      table.header = std::move(cells);
      continue;
    }
    if (cells.size() != table.header.size()) {
      throw IngestError(path, "line " + std::to_string(number) + " has " +
                                  std::to_string(cells.size()) + " fields, header has " +
                                  std::to_string(table.header.size()));
    }
    table.rows.push_back(std::move(cells));
    table.line_numbers.push_back(number);
  }
  if (in.bad()) throw IngestError(path, "read error");
  return table;
}

// Parses the timestamp column and checks the strict hourly grid.
std::vector<Timestamp> read_timestamps(const fs::path& path, const CsvTable& table,
                                       const std::string& column) {
  if (table.rows.empty()) throw GapInSeries(path, std::nullopt, "no data rows");
  const std::size_t col = table.column(path, column);
  std::vector<Timestamp> out;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto ts = parse_timestamp(table.rows[r][col]);
    if (!ts) {
      throw IngestError(path, "line " + std::to_string(table.line_numbers[r]) +
                                  ": bad timestamp '" + table.rows[r][col] + "'");
    }
    if (!out.empty()) {
      const Timestamp expected = out.back() + kHour;
      if (*ts == out.back()) {
        throw GapInSeries(path, *ts, "duplicate timestamp " + format_timestamp(*ts));
      }
      if (*ts < expected) {
        throw GapInSeries(path, *ts, "timestamp " + format_timestamp(*ts) + " is out of order");
      }
      if (*ts > expected) {
        throw GapInSeries(path, expected, "missing hour " + format_timestamp(expected));
      }
    }
    out.push_back(*ts);
  }
  return out;
}

double cell_number(const fs::path& path, const CsvTable& table, std::size_t r, std::size_t c) {
  const auto v = parse_number(table.rows[r][c]);
  if (!v) throw NonNumericCell(path, table.line_numbers[r], table.header[c], table.rows[r][c]);
  return *v;
}

}  // namespace

std::optional<double> parse_number(std::string_view cell) {
  cell = trim(cell);
  if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
  if (cell.empty()) return std::nullopt;
  double value = 0.0;
  const auto [end, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (ec != std::errc() || end != cell.data() + cell.size() || !std::isfinite(value)) {
    return std::nullopt;
  }
  return value;
}

HourlySeries load_series_csv(const fs::path& path, const ColumnSpec& columns) {
  auto all = load_columns_csv(path, columns.timestamp, {columns.value});
  return std::move(all.begin()->second);
}

std::map<std::string, HourlySeries> load_columns_csv(const fs::path& path,
                                                     const std::string& timestamp_column,
                                                     const std::vector<std::string>& value_columns) {
  const CsvTable table = read_csv(path);
  if (table.header.empty()) throw GapInSeries(path, std::nullopt, "empty file");
  std::vector<std::size_t> cols;
  for (const auto& name : value_columns) cols.push_back(table.column(path, name));
  const auto stamps = read_timestamps(path, table, timestamp_column);

  std::map<std::string, HourlySeries> out;
  for (std::size_t k = 0; k < cols.size(); ++k) {
    std::vector<double> values;
    values.reserve(table.rows.size());
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
      values.push_back(cell_number(path, table, r, cols[k]));
    }
    out.emplace(value_columns[k], HourlySeries(stamps.front(), std::move(values)));
  }
  return out;
}

std::vector<GenerationMixHour> load_mix_csv(const fs::path& path, const std::string& timestamp_column) {
  const CsvTable table = read_csv(path);
  if (table.header.empty()) throw GapInSeries(path, std::nullopt, "empty file");
  const std::size_t ts_col = table.column(path, timestamp_column);
  const auto stamps = read_timestamps(path, table, timestamp_column);

  std::vector<GenerationMixHour> out;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    GenerationMixHour hour;
    hour.timestamp = stamps[r];
    for (std::size_t c = 0; c < table.header.size(); ++c) {
      if (c == ts_col) continue;
      const double mwh = table.rows[r][c].empty() ? 0.0 : cell_number(path, table, r, c);
      hour.energy_mwh[normalize_source_name(table.header[c])] += mwh;
    }
    out.push_back(std::move(hour));
  }
  return out;
}

EmissionFactorTable load_factor_overrides(const fs::path& path, EmissionFactorTable base) {
  const CsvTable table = read_csv(path);
  const std::size_t source = table.column(path, "source");
  const std::size_t factor = table.column(path, "factor");
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const double value = cell_number(path, table, r, factor);
    if (value < 0.0) {
      throw IngestError(path, "line " + std::to_string(table.line_numbers[r]) +
                                  ": negative emission factor");
    }
    base.set(table.rows[r][source], value);
  }
  return base;
}

namespace {

PeriodLimits period_limits(const json& j) {
  PeriodLimits limits{};
  if (j.is_number()) {
    limits.fill(j.get<double>());
  } else {
    const auto values = j.get<std::vector<double>>();
    if (values.size() != kTariffPeriods) {
      throw std::invalid_argument("expected one value or " + std::to_string(kTariffPeriods) +
                                  " tariff-period values");
    }
    std::copy(values.begin(), values.end(), limits.begin());
  }
  return limits;
}

BessSpec read_bess(const json& j) {
  BessSpec b = BessSpec::case_study();
  b.p_ch_max_kw = j.value("p_ch_max_kw", b.p_ch_max_kw);
  b.p_dis_max_kw = j.value("p_dis_max_kw", b.p_dis_max_kw);
  b.soc_max_kwh = j.value("soc_max_kwh", b.soc_max_kwh);
  b.soc_min_kwh = j.value("soc_min_kwh", b.soc_min_kwh);
  b.eta_ch = j.value("eta_ch", b.eta_ch);
  b.eta_dis = j.value("eta_dis", b.eta_dis);
  b.soc_initial_kwh = j.value("soc_initial_kwh", b.soc_initial_kwh);
  b.soc_final_kwh = j.value("soc_final_kwh", b.soc_final_kwh);
  b.calendar_cost_per_hour = j.value("calendar_cost_per_hour", b.calendar_cost_per_hour);
  b.throughput_cost_per_kwh = j.value("throughput_cost_per_kwh", b.throughput_cost_per_kwh);
  if (j.contains("emission_factor_discharge")) {
    b.emission_factor_discharge = j.at("emission_factor_discharge").get<double>();
  }
  return b;
}

LoadedConfig parse_config(const fs::path& path, const json& cfg, const ConfigOverrides& overrides) {
  const fs::path dir = path.parent_path();
  auto resolve = [&](const std::string& file) {
    const fs::path p(file);
    return p.is_absolute() ? p : dir / p;
  };
  const std::string ts = cfg.value("timestamp_column", std::string("ts"));

  LoadedConfig out;
  CommunitySpec& spec = out.spec;
  spec.name = cfg.value("name", path.stem().string());

  out.factors = EmissionFactorTable::defaults();
  if (cfg.contains("factors_file")) {
    out.factors = load_factor_overrides(resolve(cfg.at("factors_file").get<std::string>()));
  }
  if (overrides.factors_file) out.factors = load_factor_overrides(*overrides.factors_file, out.factors);

  // Participants and their series.
  const json& parts = cfg.at("participants");
  const json prices = cfg.at("prices");
  const std::string buy_default = prices.value("buy_column", std::string("buy"));
  const std::string sell_default = prices.value("sell_column", std::string("sell"));
  std::vector<std::string> load_cols, price_cols;
  for (const auto& p : parts) {
    load_cols.push_back(p.value("load_column", p.at("id").get<std::string>()));
    for (const auto& col : {p.value("buy_column", buy_default), p.value("sell_column", sell_default)}) {
      if (std::find(price_cols.begin(), price_cols.end(), col) == price_cols.end()) {
        price_cols.push_back(col);
      }
    }
  }
  const auto loads = load_columns_csv(resolve(cfg.at("loads_file").get<std::string>()), ts, load_cols);
  const auto price_series = load_columns_csv(resolve(prices.at("file").get<std::string>()), ts, price_cols);

  spec.vat_rate = overrides.vat_rate.value_or(cfg.value("vat_rate", 0.0));
  const bool includes_vat = prices.value("buy_includes_vat", false);
  const double vat_factor = includes_vat ? 1.0 : 1.0 + spec.vat_rate;

  std::vector<std::uint8_t> periods;
  if (cfg.contains("tariff_periods")) {
    const json& tp = cfg.at("tariff_periods");
    const auto series = load_series_csv(resolve(tp.at("file").get<std::string>()),
                                        {ts, tp.value("column", std::string("period"))});
    for (double v : series.values()) {
      if (v != std::floor(v) || v < 1.0 || v > static_cast<double>(kTariffPeriods)) {
        throw std::invalid_argument("tariff period values must be integers 1.." +
                                    std::to_string(kTariffPeriods));
      }
      periods.push_back(static_cast<std::uint8_t>(v));
    }
  }

  for (std::size_t k = 0; k < parts.size(); ++k) {
    const json& p = parts[k];
    Participant part;
    part.id = p.at("id").get<std::string>();
    part.load_kwh = loads.at(load_cols[k]);
    const HourlySeries& raw_buy = price_series.at(p.value("buy_column", buy_default));
    std::vector<double> buy = raw_buy.values();
    for (double& v : buy) v *= vat_factor;
    part.buy_price = HourlySeries(raw_buy.start(), std::move(buy));
    part.sell_price = price_series.at(p.value("sell_column", sell_default));
    part.max_import_kw = period_limits(p.at("max_import_kw"));
    part.max_export_kw = p.contains("max_export_kw") ? period_limits(p.at("max_export_kw"))
                                                     : part.max_import_kw;
    part.tariff_period = periods;
    spec.participants.push_back(std::move(part));
    spec.sharing.static_coefficients.push_back(p.at("sharing_coefficient").get<double>());
  }
  spec.horizon_hours = spec.participants.empty() ? 0 : spec.participants.front().load_kwh.size();

  if (cfg.contains("sharing") && cfg.at("sharing").contains("variable_coefficients_file")) {
    std::vector<std::string> ids;
    for (const auto& p : spec.participants) ids.push_back(p.id);
    auto series = load_columns_csv(
        resolve(cfg.at("sharing").at("variable_coefficients_file").get<std::string>()), ts, ids);
    std::vector<HourlySeries> coefficients;
    for (const auto& id : ids) coefficients.push_back(std::move(series.at(id)));
    spec.sharing.mode = SharingMode::HourlyVariable;
    spec.sharing.variable_coefficients = std::move(coefficients);
  }

  // Battery.
  spec.bess = cfg.contains("bess") ? read_bess(cfg.at("bess")) : BessSpec::case_study();
  if (!(cfg.contains("bess") && cfg.at("bess").contains("emission_factor_discharge"))) {
    spec.bess.emission_factor_discharge = out.factors.find("battery").value_or(kBatteryEmissionFactor);
  }
  if (overrides.calendar_cost_per_hour) spec.bess.calendar_cost_per_hour = *overrides.calendar_cost_per_hour;
  if (overrides.throughput_cost_per_kwh) {
    spec.bess.throughput_cost_per_kwh = *overrides.throughput_cost_per_kwh;
  }

  // PV.
  const json& pv = cfg.at("pv");
  spec.pv.generation_kwh = load_series_csv(resolve(pv.at("file").get<std::string>()),
                                           {ts, pv.value("column", std::string("pv_kwh"))});
  spec.pv.emission_factor = pv.contains("emission_factor")
                                ? pv.at("emission_factor").get<double>()
                                : out.factors.find("solar pv").value_or(kDefaultPvEmissionFactor);

  // Grid intensity, from a series or computed from the generation mix.
  const json& grid = cfg.at("grid_intensity");
  if (grid.contains("mix_file")) {
    out.mix = load_mix_csv(resolve(grid.at("mix_file").get<std::string>()), ts);
    spec.grid_intensity = intensity_series(out.mix, out.factors);
    out.coverage_warnings = low_coverage_hours(out.mix, out.factors);
    out.unmapped_sources = unmapped_sources(out.mix, out.factors);
  } else {
    spec.grid_intensity = load_series_csv(resolve(grid.at("file").get<std::string>()),
                                          {ts, grid.value("column", std::string("gwp"))});
  }

  spec.compensation_cap_enabled = overrides.compensation_cap || cfg.value("compensation_cap", false);
  spec.allow_negative_prices = cfg.value("allow_negative_prices", false);
  out.window_hours = cfg.value("window_hours", std::size_t{24});
  if (out.window_hours == 0) throw std::invalid_argument("window_hours must be positive");
  return out;
}

}  // namespace

LoadedConfig load_config(const fs::path& path, const ConfigOverrides& overrides) {
  std::ifstream in(path);
  if (!in) throw IngestError(path, "cannot open file");
  json cfg;
  try {
    cfg = json::parse(in);
  } catch (const json::exception& e) {
    throw IngestError(path, std::string("invalid JSON: ") + e.what());
  }
  try {
    return parse_config(path, cfg, overrides);
  } catch (const json::exception& e) {
    throw IngestError(path, std::string("bad configuration: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw IngestError(path, std::string("bad configuration: ") + e.what());
  }
}

}  // namespace lecopt
