#include "lecopt/domain.hpp"

#include <cmath>
#include <sstream>

namespace lecopt {

BessSpec BessSpec::case_study() {
  BessSpec bess;
  bess.p_ch_max_kw = 90.0;
  bess.p_dis_max_kw = 90.0;
  bess.soc_max_kwh = 189.9;
  bess.soc_min_kwh = 31.65;
  bess.eta_ch = 0.95;
  bess.eta_dis = 0.95;
  bess.soc_initial_kwh = 150.0;
  bess.soc_final_kwh = 150.0;
  return bess;
}

double CommunitySpec::coefficient(std::size_t hour, std::size_t participant) const {
  if (sharing.mode == SharingMode::HourlyVariable && sharing.variable_coefficients) {
    return (*sharing.variable_coefficients)[participant][hour];
  }
  return sharing.static_coefficients[participant];
}

CommunitySpec CommunitySpec::window(std::size_t first, std::size_t count) const {
  CommunitySpec out = *this;
  out.horizon_hours = count;
  out.grid_intensity = grid_intensity.slice(first, count);
  out.pv.generation_kwh = pv.generation_kwh.slice(first, count);
  for (auto& p : out.participants) {
    p.load_kwh = p.load_kwh.slice(first, count);
    p.buy_price = p.buy_price.slice(first, count);
    p.sell_price = p.sell_price.slice(first, count);
    if (!p.tariff_period.empty()) {
      p.tariff_period.assign(p.tariff_period.begin() + static_cast<long>(first),
                             p.tariff_period.begin() + static_cast<long>(first + count));
    }
  }
  if (out.sharing.variable_coefficients) {
    for (auto& s : *out.sharing.variable_coefficients) s = s.slice(first, count);
  }
  return out;
}

bool ValidationReport::contains(std::string_view fragment) const {
  for (const auto& v : violations) {
    if (v.message.find(fragment) != std::string::npos) return true;
  }
  return false;
}

std::string ValidationReport::to_string() const {
  std::ostringstream out;
  for (const auto& v : violations) out << v.path << ": " << v.message << '\n';
  return out.str();
}

namespace {

constexpr double kCoefficientSumTolerance = 1e-9;

class Checker {
 public:
  explicit Checker(ValidationReport& report) : report_(report) {}

  void fail(std::string path, std::string message) {
    report_.violations.push_back({std::move(path), std::move(message)});
  }

  // Series must exist, be aligned to the horizon and contain finite values.
  bool series(const std::string& path, const HourlySeries& s, const CommunitySpec& spec) {
    if (s.size() != spec.horizon_hours) {
      std::ostringstream msg;
      msg << "series has " << s.size() << " hours, horizon is " << spec.horizon_hours;
      fail(path, msg.str());
      return false;
    }
    if (s.start() != spec.grid_intensity.start()) {
      fail(path, "series starts at " + format_timestamp(s.start()) + ", expected " +
                     format_timestamp(spec.grid_intensity.start()));
      return false;
    }
    for (std::size_t t = 0; t < s.size(); ++t) {
      if (!std::isfinite(s[t])) {
        fail(path + "[" + std::to_string(t) + "]", "value is not finite");
        return false;
      }
    }
    return true;
  }

  void non_negative(const std::string& path, const HourlySeries& s) {
    for (std::size_t t = 0; t < s.size(); ++t) {
      if (s[t] < 0.0) {
        fail(path + "[" + std::to_string(t) + "]", "negative value " + fmt(s[t]));
        return;
      }
    }
  }

  static std::string fmt(double v) {
    std::ostringstream out;
    out << v;
    return out.str();
  }

 private:
  ValidationReport& report_;
};

void check_bess(Checker& c, const BessSpec& b) {
  if (!(b.p_ch_max_kw > 0.0)) c.fail("bess.p_ch_max", "charging power must be positive");
  if (!(b.p_dis_max_kw > 0.0)) c.fail("bess.p_dis_max", "discharging power must be positive");
  if (!(b.eta_ch > 0.0 && b.eta_ch <= 1.0)) c.fail("bess.eta_ch", "efficiency outside (0, 1]");
  if (!(b.eta_dis > 0.0 && b.eta_dis <= 1.0)) c.fail("bess.eta_dis", "efficiency outside (0, 1]");
  if (!(b.soc_min_kwh >= 0.0)) c.fail("bess.soc_min", "soc_min must be non-negative");
  if (!(b.soc_min_kwh <= b.soc_max_kwh)) c.fail("bess.soc_min", "soc_min above soc_max");
  if (b.soc_initial_kwh > b.soc_max_kwh) c.fail("bess.soc_initial", "initial SOC above soc_max");
  if (b.soc_initial_kwh < b.soc_min_kwh) c.fail("bess.soc_initial", "initial SOC below soc_min");
  if (b.soc_final_kwh > b.soc_max_kwh) c.fail("bess.soc_final", "final SOC above soc_max");
  if (b.soc_final_kwh < b.soc_min_kwh) c.fail("bess.soc_final", "final SOC below soc_min");
  if (!(b.calendar_cost_per_hour >= 0.0)) {
    c.fail("bess.calendar_cost_per_hour", "cost must be non-negative");
  }
  if (!(b.throughput_cost_per_kwh >= 0.0)) {
    c.fail("bess.throughput_cost_per_kwh", "cost must be non-negative");
  }
  if (!(b.emission_factor_discharge >= 0.0)) {
    c.fail("bess.emission_factor", "emission factor must be non-negative");
  }
}

void check_coefficients(Checker& c, const std::vector<double>& beta, const std::string& path) {
  double sum = 0.0;
  for (std::size_t p = 0; p < beta.size(); ++p) {
    if (!(beta[p] >= 0.0 && beta[p] <= 1.0)) {
      c.fail(path + "[" + std::to_string(p) + "]",
             "sharing coefficient " + Checker::fmt(beta[p]) + " outside [0, 1]");
    }
    sum += beta[p];
  }
  if (std::abs(sum - 1.0) > kCoefficientSumTolerance) {
    c.fail(path, "sharing coefficients sum " + Checker::fmt(sum) + " ≠ 1");
  }
}

}  // namespace

ValidationReport validate_community(const CommunitySpec& spec) {
  ValidationReport report;
  Checker c(report);

  if (spec.horizon_hours == 0) c.fail("horizon_hours", "horizon must be positive");
  if (spec.participants.empty()) c.fail("participants", "at least one participant required");
  if (!(spec.vat_rate >= 0.0)) c.fail("vat_rate", "VAT rate must be non-negative");

  if (c.series("grid_intensity", spec.grid_intensity, spec)) {
    c.non_negative("grid_intensity", spec.grid_intensity);
  }
  if (c.series("pv.generation", spec.pv.generation_kwh, spec)) {
    c.non_negative("pv.generation", spec.pv.generation_kwh);
  }
  if (!(spec.pv.emission_factor >= 0.0)) {
    c.fail("pv.emission_factor", "emission factor must be non-negative");
  }
  check_bess(c, spec.bess);

  for (std::size_t p = 0; p < spec.participants.size(); ++p) {
    const Participant& part = spec.participants[p];
    const std::string base = "participants[" + (part.id.empty() ? std::to_string(p) : part.id) + "]";
    if (part.id.empty()) c.fail(base + ".id", "participant id is empty");
    for (std::size_t q = 0; q < p; ++q) {
      if (spec.participants[q].id == part.id && !part.id.empty()) {
        c.fail(base + ".id", "duplicate participant id " + part.id);
      }
    }
    const bool load_ok = c.series(base + ".load", part.load_kwh, spec);
    if (load_ok) c.non_negative(base + ".load", part.load_kwh);
    const bool buy_ok = c.series(base + ".buy_price", part.buy_price, spec);
    const bool sell_ok = c.series(base + ".sell_price", part.sell_price, spec);
    if (buy_ok && sell_ok) {
      for (std::size_t t = 0; t < spec.horizon_hours; ++t) {
        const double buy = part.buy_price[t];
        const double sell = part.sell_price[t];
        const std::string at = "[" + std::to_string(t) + "]";
        if (buy < sell) {
          c.fail(base + ".buy_price" + at, "buy price " + Checker::fmt(buy) +
                                               " below sell price " + Checker::fmt(sell));
          break;
        }
        if (!spec.allow_negative_prices && sell < 0.0) {
          c.fail(base + ".sell_price" + at, "negative sell price " + Checker::fmt(sell));
          break;
        }
      }
    }
    for (std::size_t k = 0; k < kTariffPeriods; ++k) {
      const std::string period = "[P" + std::to_string(k + 1) + "]";
      if (!(part.max_import_kw[k] > 0.0)) {
        c.fail(base + ".max_import" + period, "contracted import power must be positive");
      }
      if (!(part.max_export_kw[k] >= 0.0)) {
        c.fail(base + ".max_export" + period, "export limit must be non-negative");
      }
    }
    if (!part.tariff_period.empty()) {
      if (part.tariff_period.size() != spec.horizon_hours) {
        c.fail(base + ".tariff_period", "tariff period map does not cover the horizon");
      }
      for (auto period : part.tariff_period) {
        if (period < 1 || period > kTariffPeriods) {
          c.fail(base + ".tariff_period", "tariff period outside 1..6");
          break;
        }
      }
    }
  }

  const auto& sharing = spec.sharing;
  if (sharing.static_coefficients.size() != spec.participants.size()) {
    c.fail("sharing.static_coefficients", "expected one coefficient per participant");
  } else {
    check_coefficients(c, sharing.static_coefficients, "sharing.static_coefficients");
  }
  if (sharing.variable_coefficients) {
    const auto& series = *sharing.variable_coefficients;
    if (sharing.mode != SharingMode::HourlyVariable) {
      c.fail("sharing.variable_coefficients", "hourly coefficients given in static mode");
    }
    if (series.size() != spec.participants.size()) {
      c.fail("sharing.variable_coefficients", "expected one series per participant");
    } else {
      bool aligned = true;
      for (std::size_t p = 0; p < series.size(); ++p) {
        aligned = c.series("sharing.variable_coefficients[" + std::to_string(p) + "]",
                           series[p], spec) && aligned;
      }
      for (std::size_t t = 0; aligned && t < spec.horizon_hours; ++t) {
        std::vector<double> beta;
        for (const auto& s : series) beta.push_back(s[t]);
        const auto before = report.violations.size();
        check_coefficients(c, beta, "sharing.variable_coefficients[t=" + std::to_string(t) + "]");
        if (report.violations.size() != before) break;
      }
    }
  }
  return report;
}

}  // namespace lecopt
