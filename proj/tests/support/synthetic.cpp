#include "synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace lecopt::testing {

namespace {

constexpr double kPi = std::numbers::pi;

// Daily shape helpers, hour in [0, 24).
double office_shape(double hour) {
  // Base load overnight, plateau 8h-19h.
  const double day = std::clamp(std::sin(kPi * (hour - 6.0) / 15.0), 0.0, 1.0);
  return 0.25 + 0.75 * day;
}

double pv_shape(double hour) {
  return std::max(0.0, std::sin(kPi * (hour - 7.0) / 12.0));
}

// Cheap overnight, morning and evening peaks, midday dip from solar.
double price_shape(double hour) {
  const double morning = std::exp(-std::pow((hour - 9.0) / 2.0, 2));
  const double evening = std::exp(-std::pow((hour - 20.0) / 2.0, 2));
  const double midday = std::exp(-std::pow((hour - 14.0) / 2.5, 2));
  return 0.12 + 0.10 * morning + 0.16 * evening - 0.03 * midday;
}

// Fossil-heavy overnight, windy evenings, solar-rich middays.
double intensity_shape(double hour) {
  const double night = std::exp(-std::pow((hour - 3.0) / 3.0, 2));
  const double evening_wind = std::exp(-std::pow((hour - 20.0) / 2.5, 2));
  const double midday_solar = std::exp(-std::pow((hour - 13.0) / 3.0, 2));
  return 0.24 + 0.16 * night - 0.10 * evening_wind - 0.08 * midday_solar;
}

}  // namespace

Timestamp synthetic_start() {
  using namespace std::chrono;
  return sys_days{year{2022} / 3 / 3};
}

CommunitySpec synthetic_community(const SyntheticOptions& options) {
  const std::size_t hours = 24 * options.days;
  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> jitter(-options.noise, options.noise);
  auto noisy = [&](double v) { return options.noise > 0.0 ? v * (1.0 + jitter(rng)) : v; };

  struct Building {
    const char* id;
    double import_kw;
    double peak_kwh;
    double beta;
  };
  const Building buildings[] = {
      {"B1", 70.0, 38.0, 0.35},
      {"B2", 43.65, 18.0, 0.15},
      {"B3", 20.785, 1.5, 0.02},
      {"B4", 75.0, 52.0, 0.48},
  };

  CommunitySpec spec;
  spec.name = "synthetic";
  spec.horizon_hours = hours;
  spec.vat_rate = 0.21;
  spec.bess = BessSpec::case_study();

  const Timestamp start = synthetic_start();
  std::vector<double> pv(hours), intensity(hours), buy(hours), sell(hours);
  for (std::size_t t = 0; t < hours; ++t) {
    const double hour = static_cast<double>(t % 24);
    pv[t] = std::max(0.0, noisy(options.pv_peak_kwh * pv_shape(hour)));
    intensity[t] = std::max(0.02, noisy(intensity_shape(hour)));
    buy[t] = noisy(price_shape(hour));
    sell[t] = 0.55 * buy[t];
  }
  spec.pv.generation_kwh = HourlySeries(start, pv);
  spec.grid_intensity = HourlySeries(start, intensity);

  for (const auto& b : buildings) {
    Participant p;
    p.id = b.id;
    std::vector<double> load(hours);
    for (std::size_t t = 0; t < hours; ++t) {
      load[t] = std::max(0.0, noisy(b.peak_kwh * office_shape(static_cast<double>(t % 24))));
    }
    p.load_kwh = HourlySeries(start, load);
    p.buy_price = HourlySeries(start, buy);
    p.sell_price = HourlySeries(start, sell);
    p.max_import_kw.fill(b.import_kw);
    p.max_export_kw.fill(b.import_kw);
    spec.participants.push_back(std::move(p));
    spec.sharing.static_coefficients.push_back(b.beta);
  }
  return spec;
}

CommunitySpec flat_community(std::size_t hours, std::size_t parts) {
  const Timestamp start = synthetic_start();
  CommunitySpec spec;
  spec.name = "flat";
  spec.horizon_hours = hours;
  spec.bess = BessSpec::case_study();
  spec.pv.generation_kwh = HourlySeries::constant(start, hours, 0.0);
  spec.grid_intensity = HourlySeries::constant(start, hours, 0.1);
  for (std::size_t p = 0; p < parts; ++p) {
    Participant part;
    part.id = "P" + std::to_string(p + 1);
    part.load_kwh = HourlySeries::constant(start, hours, 1.0);
    part.buy_price = HourlySeries::constant(start, hours, 0.2);
    part.sell_price = HourlySeries::constant(start, hours, 0.1);
    part.max_import_kw.fill(50.0);
    part.max_export_kw.fill(50.0);
    spec.participants.push_back(std::move(part));
    spec.sharing.static_coefficients.push_back(1.0 / static_cast<double>(parts));
  }
  return spec;
}

}  // namespace lecopt::testing
