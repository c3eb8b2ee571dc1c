#include "lecopt/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "lecopt/ingest.hpp"
#include "lecopt/report.hpp"
#include "lecopt/scenario.hpp"

namespace lecopt {

namespace fs = std::filesystem;

namespace {

struct Options {
  std::string config;
  std::string mix;
  std::string out;
  std::string factors;
  std::string solution;
  std::optional<double> vat;
  std::optional<double> kcal_per_hour;
  std::optional<double> kcal_per_kwh;
  bool compensation_cap = false;
  double tolerance = kVerifyTolerance;
  std::vector<std::string> objectives;
  std::vector<std::string> sharings;
  std::size_t day = 0;
  std::size_t workers = 1;
  std::size_t node_limit = MilpConfig{}.node_limit;
  bool json = false;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Objective parse_objective(const std::string& s) {
  return s == "environment" ? Objective::Environment : Objective::Price;
}

SharingStrategy parse_sharing(const std::string& s) {
  return s == "variable" ? SharingStrategy::OptimizeHourlyAllocation
                         : SharingStrategy::FixedCoefficients;
}

LoadedConfig load(const Options& o) {
  ConfigOverrides ov;
  ov.vat_rate = o.vat;
  if (!o.factors.empty()) ov.factors_file = o.factors;
  ov.calendar_cost_per_hour = o.kcal_per_hour;
  ov.throughput_cost_per_kwh = o.kcal_per_kwh;
  ov.compensation_cap = o.compensation_cap;
  return load_config(o.config, ov);
}

void report_coverage(const LoadedConfig& cfg, std::ostream& err) {
  for (const auto& source : cfg.unmapped_sources) {
    err << "warning: no emission factor for source '" << source << "'; excluded from intensity\n";
  }
  for (const auto& w : cfg.coverage_warnings) {
    err << "warning: " << format_timestamp(w.timestamp) << " factor coverage "
        << format_fixed(w.coverage * 100.0, 1) << "% of generation\n";
  }
}

std::ofstream open_output(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IngestError(path, "cannot write file");
  return f;
}

std::string file_stem(const SettlementReport& r) {
  return std::string(to_string(r.objective)) + "_" + std::string(to_string(r.sharing));
}

int cmd_validate(const Options& o, std::ostream& out, std::ostream& err) {
  const LoadedConfig cfg = load(o);
  report_coverage(cfg, err);
  const ValidationReport report = validate_community(cfg.spec);
  if (!report.empty()) {
    err << report.to_string();
    return kExitValidation;
  }
  out << "ok: " << cfg.spec.participants.size() << " participants, " << cfg.spec.horizon_hours
      << " hours\n";
  return kExitOk;
}

int cmd_gwp(const Options& o, std::ostream& out, std::ostream& err) {
  std::vector<GenerationMixHour> mix;
  EmissionFactorTable factors = EmissionFactorTable::defaults();
  if (!o.mix.empty()) {
    mix = load_mix_csv(o.mix);
    if (!o.factors.empty()) factors = load_factor_overrides(o.factors, factors);
  } else if (!o.config.empty()) {
    LoadedConfig cfg = load(o);
    if (cfg.mix.empty()) throw UsageError("configuration has no generation-mix file");
    mix = std::move(cfg.mix);
    factors = std::move(cfg.factors);
  } else {
    throw UsageError("gwp needs --mix or --config");
  }
  for (const auto& source : unmapped_sources(mix, factors)) {
    err << "warning: no emission factor for source '" << source << "'; excluded from intensity\n";
  }
  for (const auto& w : low_coverage_hours(mix, factors)) {
    err << "warning: " << format_timestamp(w.timestamp) << " factor coverage "
        << format_fixed(w.coverage * 100.0, 1) << "% of generation\n";
  }
  const HourlySeries series = intensity_series(mix, factors);
  auto write = [&](std::ostream& s) {
    s << "ts,gwp_kg_per_kwh\n";
    for (std::size_t i = 0; i < series.size(); ++i) {
      s << format_timestamp(series.timestamp(i)) << ',' << format_fixed(series[i], 6) << '\n';
    }
  };
  if (o.out.empty()) {
    write(out);
  } else {
    auto f = open_output(fs::path(o.out) / "gwp.csv");
    write(f);
  }
  return kExitOk;
}

int cmd_baseline(const Options& o, std::ostream& out, std::ostream& err) {
  const LoadedConfig cfg = load(o);
  report_coverage(cfg, err);
  if (auto report = validate_community(cfg.spec); !report.empty()) throw InvalidCommunity(report);
  const BaselineResult baseline = compute_baseline(cfg.spec);
  if (o.json) {
    out << to_json(baseline).dump(2) << '\n';
  } else {
    out << format_baseline_table(baseline);
  }
  if (!o.out.empty()) {
    auto csv = open_output(fs::path(o.out) / "baseline.csv");
    write_baseline_csv(csv, baseline);
    auto js = open_output(fs::path(o.out) / "baseline.json");
    js << to_json(baseline).dump(2) << '\n';
  }
  return kExitOk;
}

std::vector<ScenarioChoice> scenario_matrix(const Options& o) {
  auto expand = [](std::vector<std::string> v, std::vector<std::string> all) {
    if (v.empty() || std::find(v.begin(), v.end(), "all") != v.end()) return all;
    std::vector<std::string> unique;
    for (auto& s : v) {
      if (std::find(unique.begin(), unique.end(), s) == unique.end()) unique.push_back(s);
    }
    return unique;
  };
  std::vector<ScenarioChoice> choices;
  for (const auto& obj : expand(o.objectives, {"price", "environment"})) {
    for (const auto& sh : expand(o.sharings, {"static", "variable"})) {
      choices.push_back({parse_objective(obj), parse_sharing(sh)});
    }
  }
  return choices;
}

int cmd_optimize(const Options& o, std::ostream& out, std::ostream& err) {
  const LoadedConfig cfg = load(o);
  report_coverage(cfg, err);
  ScenarioOptions options;
  options.window_hours = cfg.window_hours;
  options.verify_tolerance = o.tolerance;
  options.workers = std::max<std::size_t>(1, o.workers);
  options.solver.node_limit = o.node_limit;

  const auto reports = run_scenarios(cfg.spec, scenario_matrix(o), options);
  const BaselineResult baseline = compute_baseline(cfg.spec);

  nlohmann::json doc = {{"baseline", to_json(baseline)}, {"scenarios", nlohmann::json::array()}};
  std::vector<DeltaReport> deltas;
  for (const auto& r : reports) {
    deltas.push_back(compare(r, baseline));
    doc["scenarios"].push_back({{"settlement", to_json(r)}, {"comparison", to_json(deltas.back())}});
    if (!r.proven_optimal) {
      err << "warning: " << r.label << " stopped at a limit; best incumbent reported\n";
    }
  }

  if (o.json) {
    out << doc.dump(2) << '\n';
  } else {
    out << "baseline\n" << format_baseline_table(baseline);
    for (const auto& d : deltas) out << '\n' << format_delta_table(d);
  }

  if (!o.out.empty()) {
    const fs::path dir(o.out);
    auto js = open_output(dir / "report.json");
    js << doc.dump(2) << '\n';
    auto base = open_output(dir / "baseline.csv");
    write_baseline_csv(base, baseline);
    for (std::size_t i = 0; i < reports.size(); ++i) {
      const std::string stem = file_stem(reports[i]);
      auto summary = open_output(dir / (stem + "_summary.csv"));
      write_delta_csv(summary, deltas[i]);
      auto trace = open_output(dir / (stem + "_trace.csv"));
      write_trace_csv(trace, reports[i]);
      auto parts = open_output(dir / (stem + "_participants.csv"));
      write_participant_trace_csv(parts, reports[i]);
    }
  }
  return kExitOk;
}

CommunityModel day_model(const Options& o, const LoadedConfig& cfg) {
  const std::size_t first = o.day * cfg.window_hours;
  if (first >= cfg.spec.horizon_hours) {
    throw UsageError("day " + std::to_string(o.day) + " is beyond the horizon");
  }
  const std::size_t count = std::min(cfg.window_hours, cfg.spec.horizon_hours - first);
  const Objective objective = parse_objective(o.objectives.empty() ? "price" : o.objectives.front());
  const SharingStrategy sharing = parse_sharing(o.sharings.empty() ? "static" : o.sharings.front());
  if (auto report = validate_community(cfg.spec); !report.empty()) throw InvalidCommunity(report);
  return build_model(cfg.spec.window(first, count), objective, sharing);
}

int cmd_export_lp(const Options& o, std::ostream& out, std::ostream&) {
  const LoadedConfig cfg = load(o);
  const CommunityModel model = day_model(o, cfg);
  const std::string text = export_lp_text(model.problem);
  if (o.out.empty()) {
    out << text;
  } else {
    auto f = open_output(o.out);
    f << text;
  }
  return kExitOk;
}

int cmd_verify(const Options& o, std::ostream& out, std::ostream& err) {
  const LoadedConfig cfg = load(o);
  const CommunityModel model = day_model(o, cfg);
  std::ifstream in(o.solution);
  if (!in) throw IngestError(o.solution, "cannot open file");
  const std::vector<double> values = read_solution_text(in, model.problem);
  const ViolationReport violations = verify_solution(model.problem, values, o.tolerance);
  if (!violations.empty()) {
    err << violations.to_string();
    return kExitValidation;
  }
  const double external = model.problem.objective(values);
  const MilpSolution own = solve_milp(model.problem);
  if (!own.has_incumbent) {
    err << "embedded solver found no feasible point\n";
    return kExitInfeasible;
  }
  const double diff = std::abs(external - own.objective);
  out << "external objective " << format_fixed(external, 9) << '\n'
      << "embedded objective " << format_fixed(own.objective, 9) << '\n'
      << "difference " << format_fixed(diff, 9) << '\n';
  if (diff > o.tolerance * std::max(1.0, std::abs(own.objective))) {
    err << "objectives disagree\n";
    return kExitValidation;
  }
  out << "ok\n";
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Local energy community scheduler", "lecopt"};
  app.require_subcommand(1);
  Options o;

  auto add_config = [&](CLI::App* cmd, bool required) {
    auto* opt = cmd->add_option("--config", o.config, "run configuration (JSON)");
    if (required) opt->required();
    opt->check(CLI::ExistingFile);
    cmd->add_option("--vat", o.vat, "VAT rate applied to raw buy prices");
    cmd->add_option("--factors", o.factors, "emission-factor override CSV (source,factor)")
        ->check(CLI::ExistingFile);
    cmd->add_option("--kcal-per-hour", o.kcal_per_hour, "battery calendar cost, EUR/h");
    cmd->add_option("--kcal-per-kwh", o.kcal_per_kwh, "battery throughput cost, EUR/kWh");
    cmd->add_flag("--compensation-cap", o.compensation_cap,
                  "limit surplus compensation to the value of imports");
  };
  auto add_scenario = [&](CLI::App* cmd, bool multiple) {
    auto* obj = cmd->add_option("--objective", o.objectives, "price, environment");
    auto* sh = cmd->add_option("--sharing", o.sharings, "static, variable");
    if (multiple) {
      obj->check(CLI::IsMember({"price", "environment", "all"}));
      sh->check(CLI::IsMember({"static", "variable", "all"}));
    } else {
      obj->check(CLI::IsMember({"price", "environment"}))->expected(1);
      sh->check(CLI::IsMember({"static", "variable"}))->expected(1);
    }
  };

  auto* validate = app.add_subcommand("validate", "check the community data");
  add_config(validate, true);

  auto* gwp = app.add_subcommand("gwp", "hourly grid intensity from a generation mix");
  gwp->add_option("--mix", o.mix, "generation-mix CSV")->check(CLI::ExistingFile);
  add_config(gwp, false);
  gwp->add_option("--out", o.out, "output directory");

  auto* baseline = app.add_subcommand("baseline", "grid-only cost and emissions");
  add_config(baseline, true);
  baseline->add_option("--out", o.out, "output directory");
  baseline->add_flag("--json", o.json, "print JSON instead of a table");

  auto* optimize = app.add_subcommand("optimize", "run the scenario matrix");
  add_config(optimize, true);
  add_scenario(optimize, true);
  optimize->add_option("--out", o.out, "output directory");
  optimize->add_option("--tolerance", o.tolerance, "verification tolerance")
      ->check(CLI::PositiveNumber);
  optimize->add_option("--workers", o.workers, "concurrent windows");
  optimize->add_option("--node-limit", o.node_limit, "branch-and-bound node limit per window");
  optimize->add_flag("--json", o.json, "print JSON instead of tables");

  auto* export_lp = app.add_subcommand("export-lp", "write one window as LP text");
  add_config(export_lp, true);
  add_scenario(export_lp, false);
  export_lp->add_option("--day", o.day, "window index");
  export_lp->add_option("--out", o.out, "output file");

  auto* verify = app.add_subcommand("verify", "check an externally produced solution");
  add_config(verify, true);
  add_scenario(verify, false);
  verify->add_option("--day", o.day, "window index");
  verify->add_option("--solution", o.solution, "solution file (column value per line)")
      ->required();
  verify->add_option("--tolerance", o.tolerance, "verification tolerance")
      ->check(CLI::PositiveNumber);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitValidation;
  }

  try {
    if (*validate) return cmd_validate(o, out, err);
    if (*gwp) return cmd_gwp(o, out, err);
    if (*baseline) return cmd_baseline(o, out, err);
    if (*optimize) return cmd_optimize(o, out, err);
    if (*export_lp) return cmd_export_lp(o, out, err);
    if (*verify) return cmd_verify(o, out, err);
  } catch (const InvalidCommunity& e) {
    err << "invalid community data:\n" << e.report().to_string();
    return kExitValidation;
  } catch (const ScenarioInfeasible& e) {
    err << "error: " << e.what() << '\n';
    return kExitInfeasible;
  } catch (const IngestError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  }
  return kExitValidation;
}

}  // namespace lecopt
