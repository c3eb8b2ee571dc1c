#include <doctest.h>

#include <algorithm>
#include <random>

#include "lecopt/gwp.hpp"
#include "synthetic.hpp"

using namespace lecopt;

namespace {

GenerationMixHour mix(std::map<std::string, double> energy, Timestamp ts = testing::synthetic_start()) {
  return {ts, std::move(energy)};
}

}  // namespace

TEST_SUITE("gwp") {
  TEST_CASE("default factors match the life-cycle averages") {
    const auto t = EmissionFactorTable::defaults();
    CHECK(t.find("hard coal") == 0.855);
    CHECK(t.find("lignite") == 1.05);
    CHECK(t.find("natural gas") == 0.690);
    CHECK(t.find("nuclear") == 0.019);
    CHECK(t.find("biomass") == 0.069);
    CHECK(t.find("hydro") == 0.011);
    CHECK(t.find("wind") == 0.022);
    CHECK(t.find("battery") == 0.060);
    CHECK(t.find("solar pv") == 0.045);
  }

  TEST_CASE("hourly intensity examples") {
    const auto f = EmissionFactorTable::defaults();
    CHECK(hourly_intensity(mix({{"wind", 100}}), f) == doctest::Approx(0.022).epsilon(1e-12));
    CHECK(std::abs(hourly_intensity(mix({{"hard coal", 50}, {"nuclear", 50}}), f) - 0.437) <= 1e-9);
    CHECK_THROWS_AS(hourly_intensity(mix({}), f), ZeroCoveredGeneration);
    CHECK_THROWS_AS(hourly_intensity(mix({{"cogeneration", 10}}), f), ZeroCoveredGeneration);
  }

  TEST_CASE("uncovered sources are left out of numerator and denominator") {
    const auto f = EmissionFactorTable::defaults();
    const double i = hourly_intensity(mix({{"wind", 96}, {"unknown_src", 4}}), f);
    CHECK(i == doctest::Approx(0.022).epsilon(1e-12));
  }

  TEST_CASE("source names are normalized and aliases resolved") {
    CHECK(normalize_source_name("  Hard_Coal ") == "hard coal");
    CHECK(normalize_source_name("Combined Cycle") == "natural gas");
    CHECK(normalize_source_name("Hydro-power") == "hydro");
    CHECK(normalize_source_name("hydropower") == "hydro");
    CHECK(normalize_source_name("Solar") == "solar pv");
    CHECK(normalize_source_name("Cogeneration") == "cogeneration");
    const auto f = EmissionFactorTable::defaults();
    CHECK(hourly_intensity(mix({{"WIND", 1}}), f) == doctest::Approx(0.022));
  }

  TEST_CASE("intensity series") {
    const auto f = EmissionFactorTable::defaults();
    const Timestamp t0 = testing::synthetic_start();
    std::vector<GenerationMixHour> day;
    for (int h = 0; h < 24; ++h) day.push_back(mix({{"wind", 100}}, t0 + kHour * h));
    const HourlySeries s = intensity_series(day, f);
    REQUIRE(s.size() == 24);
    CHECK(s.start() == t0);
    for (double v : s.values()) CHECK(v == doctest::Approx(0.022).epsilon(1e-12));

    const HourlySeries two =
        intensity_series({mix({{"wind", 100}}, t0), mix({{"hard coal", 100}}, t0 + kHour)}, f);
    CHECK(two[0] == doctest::Approx(0.022));
    CHECK(two[1] == doctest::Approx(0.855));

    CHECK_THROWS_AS(intensity_series({mix({{"wind", 1}}, t0 + kHour), mix({{"wind", 1}}, t0)}, f),
                    std::invalid_argument);
    CHECK_THROWS_AS(intensity_series({mix({{"wind", 1}}, t0), mix({{"wind", 1}}, t0 + 2 * kHour)}, f),
                    std::invalid_argument);
  }

  TEST_CASE("zero covered generation names the hour") {
    const auto f = EmissionFactorTable::defaults();
    const Timestamp t0 = testing::synthetic_start();
    try {
      intensity_series({mix({{"wind", 1}}, t0), mix({{"mystery", 1}}, t0 + kHour)}, f);
      FAIL("expected ZeroCoveredGeneration");
    } catch (const ZeroCoveredGeneration& e) {
      REQUIRE(e.when());
      CHECK(*e.when() == t0 + kHour);
    }
  }

  TEST_CASE("coverage ratio") {
    const auto f = EmissionFactorTable::defaults();
    CHECK(coverage_ratio(mix({{"wind", 10}, {"nuclear", 5}}), f) == 1.0);
    CHECK(coverage_ratio(mix({{"wind", 96}, {"unknown_src", 4}}), f) == doctest::Approx(0.96));
    CHECK(coverage_ratio(mix({{"unknown_src", 4}}), f) == 0.0);
    CHECK_THROWS(coverage_ratio(mix({}), f));

    const Timestamp t0 = testing::synthetic_start();
    const std::vector<GenerationMixHour> hours{mix({{"wind", 95}, {"cogeneration", 5}}, t0),
                                               mix({{"wind", 80}, {"cogeneration", 20}}, t0 + kHour)};
    const auto low = low_coverage_hours(hours, f);
    REQUIRE(low.size() == 1);
    CHECK(low[0].timestamp == t0 + kHour);
    CHECK(low[0].coverage == doctest::Approx(0.8));
    CHECK(unmapped_sources(hours, f) == std::vector<std::string>{"cogeneration"});
  }

  TEST_CASE("overrides replace defaults and reject negative factors") {
    auto f = EmissionFactorTable::defaults();
    f.set("Solar PV", 0.03);
    CHECK(f.find("solar") == 0.03);
    f.set("cogeneration", 0.5);
    CHECK(hourly_intensity(mix({{"cogeneration", 1}, {"wind", 1}}), f) == doctest::Approx(0.261));
    CHECK_THROWS_AS(f.set("wind", -0.1), std::invalid_argument);
  }

  TEST_CASE("convex-combination, scale-invariance and neutral-source properties") {
    const auto f = EmissionFactorTable::defaults();
    std::vector<std::string> sources;
    for (const auto& [name, factor] : f.entries()) sources.push_back(name);
    std::mt19937_64 rng(2022);
    std::uniform_real_distribution<double> energy(0.0, 5000.0);
    std::uniform_real_distribution<double> scale(1e-3, 1e3);
    for (int trial = 0; trial < 1000; ++trial) {
      std::map<std::string, double> e;
      double lo = 1e9, hi = -1e9;
      for (const auto& s : sources) {
        if (rng() % 2) continue;
        e[s] = energy(rng) + 1e-3;
        lo = std::min(lo, *f.find(s));
        hi = std::max(hi, *f.find(s));
      }
      if (e.empty()) continue;
      const double i = hourly_intensity(mix(e), f);
      CHECK(i >= lo - 1e-12);
      CHECK(i <= hi + 1e-12);

      const double k = scale(rng);
      auto scaled = e;
      for (auto& [s, v] : scaled) v *= k;
      CHECK(hourly_intensity(mix(scaled), f) == doctest::Approx(i).epsilon(1e-12));

      auto table = f;
      table.set("neutral", i);
      auto extended = e;
      extended["neutral"] = energy(rng);
      CHECK(hourly_intensity(mix(extended), table) == doctest::Approx(i).epsilon(1e-12));
    }
  }
}
