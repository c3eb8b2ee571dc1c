#include "lecopt/report.hpp"

#include <charconv>
#include <cmath>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace lecopt {

using nlohmann::json;

namespace {

double to_tonnes(double kg) { return kg / 1000.0; }

json totals_json(const ParticipantTotals& t) {
  return {{"id", t.id}, {"cost_eur", t.cost_eur}, {"emissions_kg", t.emissions_kg}};
}

ParticipantTotals totals_from(const json& j) {
  return {j.at("id").get<std::string>(), j.at("cost_eur").get<double>(),
          j.at("emissions_kg").get<double>()};
}

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::optional<double> optional_from(const json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

json delta_row_json(const DeltaRow& r) {
  return {{"id", r.id},
          {"baseline_cost_eur", r.baseline_cost_eur},
          {"cost_eur", r.cost_eur},
          {"cost_change_pct", optional_json(r.cost_change_pct)},
          {"baseline_emissions_kg", r.baseline_emissions_kg},
          {"emissions_kg", r.emissions_kg},
          {"emissions_change_pct", optional_json(r.emissions_change_pct)}};
}

DeltaRow delta_row_from(const json& j) {
  DeltaRow r;
  r.id = j.at("id").get<std::string>();
  r.baseline_cost_eur = j.at("baseline_cost_eur").get<double>();
  r.cost_eur = j.at("cost_eur").get<double>();
  r.cost_change_pct = optional_from(j.at("cost_change_pct"));
  r.baseline_emissions_kg = j.at("baseline_emissions_kg").get<double>();
  r.emissions_kg = j.at("emissions_kg").get<double>();
  r.emissions_change_pct = optional_from(j.at("emissions_change_pct"));
  return r;
}

Objective objective_from(const std::string& s) {
  if (s == "price") return Objective::Price;
  if (s == "environment") return Objective::Environment;
  throw std::invalid_argument("unknown objective " + s);
}

SharingStrategy sharing_from(const std::string& s) {
  if (s == "static") return SharingStrategy::FixedCoefficients;
  if (s == "variable") return SharingStrategy::OptimizeHourlyAllocation;
  throw std::invalid_argument("unknown sharing strategy " + s);
}

// Pads to `width` counting UTF-8 code points, not bytes.
std::string pad_left(const std::string& s, std::size_t width) {
  std::size_t glyphs = 0;
  for (unsigned char c : s) glyphs += (c & 0xC0) != 0x80 ? 1 : 0;
  return glyphs >= width ? s : std::string(width - glyphs, ' ') + s;
}

std::string pad_right(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

}  // namespace

std::string format_fixed(double value, int decimals) {
  if (!std::isfinite(value)) throw std::invalid_argument("cannot format a non-finite value");
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::fixed, decimals);
  if (ec != std::errc()) throw std::runtime_error("number formatting failed");
  std::string s(buf, end);
  if (s.front() == '-' && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
  return s;
}

std::string format_grouped(double value, int decimals) {
  std::string s = format_fixed(value, decimals);
  const bool negative = s.front() == '-';
  const std::size_t digits_begin = negative ? 1 : 0;
  std::size_t int_end = s.find('.');
  if (int_end == std::string::npos) int_end = s.size();
  for (std::size_t pos = int_end; pos > digits_begin + 3; pos -= 3) s.insert(pos - 3, " ");
  return s;
}

std::string format_percent(const std::optional<double>& pct) {
  return pct ? format_fixed(*pct, 1) : std::string(kUndefinedMarker);
}

std::string format_arrow_percent(const std::optional<double>& pct) {
  if (!pct) return kUndefinedMarker;
  std::string s = format_fixed(*pct, 1);
  if (s.front() == '-') return "↓ " + s.substr(1) + "%";
  if (s.find_first_not_of("0.") == std::string::npos) return s + "%";
  return "↑ " + s + "%";
}

json to_json(const BaselineResult& baseline) {
  json parts = json::array();
  for (const auto& p : baseline.participants) parts.push_back(totals_json(p));
  return {{"participants", parts}, {"community", totals_json(baseline.community)}};
}

BaselineResult baseline_from_json(const json& j) {
  BaselineResult b;
  for (const auto& p : j.at("participants")) b.participants.push_back(totals_from(p));
  b.community = totals_from(j.at("community"));
  return b;
}

json to_json(const SettlementReport& report) {
  json parts = json::array();
  for (const auto& p : report.participants) parts.push_back(totals_json(p));
  json traces = json::array();
  for (const auto& h : report.traces) {
    traces.push_back({{"ts", format_timestamp(h.timestamp)},
                      {"price_buy", h.price_buy},
                      {"price_sell", h.price_sell},
                      {"gwp_grid", h.gwp_grid},
                      {"soc", h.soc},
                      {"charge", h.charge},
                      {"discharge", h.discharge},
                      {"baseline_load", h.baseline_load},
                      {"lec_load", h.lec_load},
                      {"pv", h.pv},
                      {"sold", h.sold},
                      {"net_generation", h.net_generation},
                      {"buy", h.buy},
                      {"sell", h.sell},
                      {"allocation", h.allocation},
                      {"beta", h.beta}});
  }
  return {{"label", report.label},
          {"objective", std::string(to_string(report.objective))},
          {"sharing", std::string(to_string(report.sharing))},
          {"participants", parts},
          {"community", totals_json(report.community)},
          {"objective_value", report.objective_value},
          {"windows", report.windows},
          {"nodes", report.nodes},
          {"proven_optimal", report.proven_optimal},
          {"traces", traces}};
}

SettlementReport settlement_from_json(const json& j) {
  SettlementReport r;
  r.label = j.at("label").get<std::string>();
  r.objective = objective_from(j.at("objective").get<std::string>());
  r.sharing = sharing_from(j.at("sharing").get<std::string>());
  for (const auto& p : j.at("participants")) r.participants.push_back(totals_from(p));
  r.community = totals_from(j.at("community"));
  r.objective_value = j.at("objective_value").get<double>();
  r.windows = j.at("windows").get<std::size_t>();
  r.nodes = j.at("nodes").get<std::size_t>();
  r.proven_optimal = j.at("proven_optimal").get<bool>();
  for (const auto& h : j.at("traces")) {
    HourTrace t;
    const auto ts = parse_timestamp(h.at("ts").get<std::string>());
    if (!ts) throw std::invalid_argument("bad trace timestamp " + h.at("ts").dump());
    t.timestamp = *ts;
    t.price_buy = h.at("price_buy").get<double>();
    t.price_sell = h.at("price_sell").get<double>();
    t.gwp_grid = h.at("gwp_grid").get<double>();
    t.soc = h.at("soc").get<double>();
    t.charge = h.at("charge").get<double>();
    t.discharge = h.at("discharge").get<double>();
    t.baseline_load = h.at("baseline_load").get<double>();
    t.lec_load = h.at("lec_load").get<double>();
    t.pv = h.at("pv").get<double>();
    t.sold = h.at("sold").get<double>();
    t.net_generation = h.at("net_generation").get<double>();
    t.buy = h.at("buy").get<std::vector<double>>();
    t.sell = h.at("sell").get<std::vector<double>>();
    t.allocation = h.at("allocation").get<std::vector<double>>();
    t.beta = h.at("beta").get<std::vector<double>>();
    r.traces.push_back(std::move(t));
  }
  return r;
}

json to_json(const DeltaReport& delta) {
  json rows = json::array();
  for (const auto& r : delta.participants) rows.push_back(delta_row_json(r));
  return {{"label", delta.label}, {"participants", rows},
          {"community", delta_row_json(delta.community)}};
}

DeltaReport delta_from_json(const json& j) {
  DeltaReport d;
  d.label = j.at("label").get<std::string>();
  for (const auto& r : j.at("participants")) d.participants.push_back(delta_row_from(r));
  d.community = delta_row_from(j.at("community"));
  return d;
}

void write_baseline_csv(std::ostream& out, const BaselineResult& baseline) {
  out << "building,total_cost_eur,total_ghg_t\n";
  auto row = [&](const ParticipantTotals& t) {
    out << t.id << ',' << format_fixed(t.cost_eur, 2) << ','
        << format_fixed(to_tonnes(t.emissions_kg), 2) << '\n';
  };
  for (const auto& p : baseline.participants) row(p);
  row(baseline.community);
}

void write_delta_csv(std::ostream& out, const DeltaReport& delta) {
  out << "building,total_cost_eur,cost_vs_baseline_pct,total_ghg_t,ghg_vs_baseline_pct\n";
  auto row = [&](const DeltaRow& r) {
    out << r.id << ',' << format_fixed(r.cost_eur, 2) << ',' << format_percent(r.cost_change_pct)
        << ',' << format_fixed(to_tonnes(r.emissions_kg), 2) << ','
        << format_percent(r.emissions_change_pct) << '\n';
  };
  for (const auto& r : delta.participants) row(r);
  row(delta.community);
}

void write_trace_csv(std::ostream& out, const SettlementReport& report) {
  out << "ts,price_buy,price_sell,gwp_grid,soc,charge,discharge,baseline_load,lec_load,pv,sold\n";
  for (const auto& h : report.traces) {
    out << format_timestamp(h.timestamp) << ',' << format_fixed(h.price_buy, 6) << ','
        << format_fixed(h.price_sell, 6) << ',' << format_fixed(h.gwp_grid, 6) << ','
        << format_fixed(h.soc, 4) << ',' << format_fixed(h.charge, 4) << ','
        << format_fixed(h.discharge, 4) << ',' << format_fixed(h.baseline_load, 4) << ','
        << format_fixed(h.lec_load, 4) << ',' << format_fixed(h.pv, 4) << ','
        << format_fixed(h.sold, 4) << '\n';
  }
}

void write_participant_trace_csv(std::ostream& out, const SettlementReport& report) {
  out << "building,hour,ts,buy,sell,allocation,beta\n";
  for (std::size_t p = 0; p < report.participants.size(); ++p) {
    for (std::size_t t = 0; t < report.traces.size(); ++t) {
      const auto& h = report.traces[t];
      out << report.participants[p].id << ',' << t << ',' << format_timestamp(h.timestamp) << ','
          << format_fixed(h.buy[p], 4) << ',' << format_fixed(h.sell[p], 4) << ','
          << format_fixed(h.allocation[p], 4) << ',' << format_fixed(h.beta[p], 6) << '\n';
    }
  }
}

std::string format_baseline_table(const BaselineResult& baseline) {
  std::ostringstream out;
  out << pad_right("Building", 10) << pad_left("Total cost (EUR)", 18)
      << pad_left("Total GHG (t CO2)", 19) << '\n';
  auto row = [&](const ParticipantTotals& t) {
    out << pad_right(t.id, 10) << pad_left(format_grouped(t.cost_eur, 2), 18)
        << pad_left(format_grouped(to_tonnes(t.emissions_kg), 2), 19) << '\n';
  };
  for (const auto& p : baseline.participants) row(p);
  row(baseline.community);
  return out.str();
}

std::string format_delta_table(const DeltaReport& delta) {
  std::ostringstream out;
  out << delta.label << '\n';
  out << pad_right("Building", 10) << pad_left("Total cost (EUR)", 18) << pad_left("Baseline", 12)
      << pad_left("Total GHG (t CO2)", 19) << pad_left("Baseline", 12) << '\n';
  auto row = [&](const DeltaRow& r) {
    out << pad_right(r.id, 10) << pad_left(format_grouped(r.cost_eur, 2), 18)
        << pad_left(format_arrow_percent(r.cost_change_pct), 12)
        << pad_left(format_grouped(to_tonnes(r.emissions_kg), 2), 19)
        << pad_left(format_arrow_percent(r.emissions_change_pct), 12) << '\n';
  };
  for (const auto& r : delta.participants) row(r);
  row(delta.community);
  return out.str();
}

}  // namespace lecopt
