#include "lecopt/model.hpp"

#include <algorithm>
#include <cmath>

namespace lecopt {

namespace {

constexpr double kZeroNetGeneration = 1e-6;

}  // namespace

std::string_view to_string(Objective objective) {
  return objective == Objective::Price ? "price" : "environment";
}

std::string_view to_string(SharingStrategy sharing) {
  return sharing == SharingStrategy::FixedCoefficients ? "static" : "variable";
}

std::string scenario_label(Objective objective, SharingStrategy sharing) {
  return std::string(to_string(objective)) + "/" + std::string(to_string(sharing));
}

bool is_per_participant(VarKind kind) {
  switch (kind) {
    case VarKind::ChiBuy:
    case VarKind::ChiSell:
    case VarKind::DeltaBuy:
    case VarKind::DeltaSell:
    case VarKind::Alloc:
      return true;
    default:
      return false;
  }
}

std::string_view var_kind_name(VarKind kind) {
  switch (kind) {
    case VarKind::ChiBuy: return "chi_buy";
    case VarKind::ChiSell: return "chi_sell";
    case VarKind::DeltaBuy: return "delta_buy";
    case VarKind::DeltaSell: return "delta_sell";
    case VarKind::SigmaCh: return "sigma_ch";
    case VarKind::SigmaDis: return "sigma_dis";
    case VarKind::DeltaCh: return "delta_ch";
    case VarKind::DeltaDis: return "delta_dis";
    case VarKind::Soc: return "soc";
    case VarKind::Alloc: return "alloc";
    case VarKind::DeltaShare: return "delta_share";
  }
  return "unknown";
}

std::string VariableIndex::column_name(VarKind kind, std::size_t hour, std::size_t participant) {
  std::string name(var_kind_name(kind));
  name += "_" + std::to_string(hour);
  if (is_per_participant(kind)) name += "_" + std::to_string(participant);
  return name;
}

std::size_t VariableIndex::slot(VarKind kind, std::size_t hour, std::size_t participant) const {
  if (hour >= hours_ || (is_per_participant(kind) ? participant >= participants_ : participant != 0)) {
    throw std::out_of_range("variable " + column_name(kind, hour, participant) + " out of range");
  }
  return is_per_participant(kind) ? hour * participants_ + participant : hour;
}

void VariableIndex::assign(VarKind kind, std::size_t hour, std::size_t participant,
                           std::size_t column) {
  auto& slots = slots_[static_cast<std::size_t>(kind)];
  if (slots.empty()) {
    slots.assign(is_per_participant(kind) ? hours_ * participants_ : hours_, MilpProblem::npos);
  }
  const std::size_t s = slot(kind, hour, participant);
  if (slots[s] != MilpProblem::npos) {
    throw std::logic_error("variable " + column_name(kind, hour, participant) + " assigned twice");
  }
  if (column != keys_.size()) throw std::logic_error("columns must be assigned in order");
  slots[s] = column;
  keys_.push_back({kind, hour, participant});
}

std::size_t VariableIndex::at(VarKind kind, std::size_t hour, std::size_t participant) const {
  const auto& slots = slots_[static_cast<std::size_t>(kind)];
  if (slots.empty()) {
    throw std::out_of_range(std::string("no ") + std::string(var_kind_name(kind)) +
                            " variables in this model");
  }
  const std::size_t column = slots[slot(kind, hour, participant)];
  if (column == MilpProblem::npos) {
    throw std::out_of_range("variable " + column_name(kind, hour, participant) + " not declared");
  }
  return column;
}

InvalidCommunity::InvalidCommunity(ValidationReport report)
    : std::invalid_argument("community spec failed validation:\n" + report.to_string()),
      report_(std::move(report)) {}

CommunityModel declare_variables(const CommunitySpec& spec, Objective objective,
                                 SharingStrategy sharing) {
  const std::size_t hours = spec.horizon_hours;
  const std::size_t parts = spec.participants.size();
  CommunityModel model;
  model.problem.set_label(scenario_label(objective, sharing));
  model.index = VariableIndex(hours, parts);
  model.objective = objective;
  model.sharing = sharing;
  model.hours = hours;
  for (const auto& p : spec.participants) model.participant_ids.push_back(p.id);

  auto& problem = model.problem;
  auto& index = model.index;
  auto continuous = [&](VarKind kind, std::size_t t, std::size_t p, double lo, double hi) {
    index.assign(kind, t, p, problem.add_column(VariableIndex::column_name(kind, t, p), lo, hi));
  };
  auto binary = [&](VarKind kind, std::size_t t, std::size_t p) {
    index.assign(kind, t, p, problem.add_binary(VariableIndex::column_name(kind, t, p)));
  };

  for (std::size_t t = 0; t < hours; ++t) {
    for (std::size_t p = 0; p < parts; ++p) {
      continuous(VarKind::ChiBuy, t, p, 0.0, spec.participants[p].import_limit(t));
    }
  }
  for (std::size_t t = 0; t < hours; ++t) {
    for (std::size_t p = 0; p < parts; ++p) {
      continuous(VarKind::ChiSell, t, p, 0.0, spec.participants[p].export_limit(t));
    }
  }
  for (std::size_t t = 0; t < hours; ++t) {
    for (std::size_t p = 0; p < parts; ++p) binary(VarKind::DeltaBuy, t, p);
  }
  for (std::size_t t = 0; t < hours; ++t) {
    for (std::size_t p = 0; p < parts; ++p) binary(VarKind::DeltaSell, t, p);
  }
  const BessSpec& bess = spec.bess;
  for (std::size_t t = 0; t < hours; ++t) continuous(VarKind::SigmaCh, t, 0, 0.0, bess.p_ch_max_kw);
  for (std::size_t t = 0; t < hours; ++t) {
    continuous(VarKind::SigmaDis, t, 0, 0.0, bess.p_dis_max_kw);
  }
  for (std::size_t t = 0; t < hours; ++t) binary(VarKind::DeltaCh, t, 0);
  for (std::size_t t = 0; t < hours; ++t) binary(VarKind::DeltaDis, t, 0);
  for (std::size_t t = 0; t < hours; ++t) {
    continuous(VarKind::Soc, t, 0, bess.soc_min_kwh, bess.soc_max_kwh);
  }

  if (sharing == SharingStrategy::OptimizeHourlyAllocation) {
    // An allocation lies between zero and the hour's net generation, whose
    // range is [pv - p_ch_max, pv + p_dis_max].
    for (std::size_t t = 0; t < hours; ++t) {
      const double upper = spec.pv.generation_kwh[t] + bess.p_dis_max_kw;
      for (std::size_t p = 0; p < parts; ++p) {
        continuous(VarKind::Alloc, t, p, -bess.p_ch_max_kw, upper);
      }
    }
    for (std::size_t t = 0; t < hours; ++t) {
      binary(VarKind::DeltaShare, t, 0);
      // Fixing the sign first removes the mixed-sign allocations that make
      // the relaxation degenerate.
      problem.set_branch_priority(index.at(VarKind::DeltaShare, t), 1);
    }
  } else {
    model.beta.assign(hours, std::vector<double>(parts, 0.0));
    for (std::size_t t = 0; t < hours; ++t) {
      for (std::size_t p = 0; p < parts; ++p) model.beta[t][p] = spec.coefficient(t, p);
    }
  }
  return model;
}

void add_energy_balance(CommunityModel& model, const CommunitySpec& spec) {
  const auto& index = model.index;
  const bool fixed = model.sharing == SharingStrategy::FixedCoefficients;
  for (std::size_t t = 0; t < model.hours; ++t) {
    for (std::size_t p = 0; p < spec.participants.size(); ++p) {
      std::vector<Term> terms;
      double rhs = spec.participants[p].load_kwh[t];
      if (fixed) {
        // beta (pv + dis - ch) + buy = load + sell, with pv moved to the rhs.
        const double beta = model.beta[t][p];
        if (beta != 0.0) {
          terms.push_back({index.at(VarKind::SigmaDis, t), beta});
          terms.push_back({index.at(VarKind::SigmaCh, t), -beta});
        }
        rhs -= beta * spec.pv.generation_kwh[t];
      } else {
        terms.push_back({index.at(VarKind::Alloc, t, p), 1.0});
      }
      terms.push_back({index.at(VarKind::ChiBuy, t, p), 1.0});
      terms.push_back({index.at(VarKind::ChiSell, t, p), -1.0});
      model.problem.add_row("balance_" + std::to_string(t) + "_" + std::to_string(p),
                            std::move(terms), RowSense::Equal, rhs);
    }
  }
}

void add_exclusivity(CommunityModel& model, const CommunitySpec& spec) {
  const auto& index = model.index;
  auto& problem = model.problem;
  for (std::size_t t = 0; t < model.hours; ++t) {
    for (std::size_t p = 0; p < spec.participants.size(); ++p) {
      const std::string tag = std::to_string(t) + "_" + std::to_string(p);
      const std::size_t buy = index.at(VarKind::ChiBuy, t, p);
      const std::size_t sell = index.at(VarKind::ChiSell, t, p);
      const std::size_t d_buy = index.at(VarKind::DeltaBuy, t, p);
      const std::size_t d_sell = index.at(VarKind::DeltaSell, t, p);
      problem.add_row("trade_excl_" + tag, {{d_buy, 1.0}, {d_sell, 1.0}}, RowSense::LessEqual, 1.0);
      problem.add_row("import_cap_" + tag,
                      {{buy, 1.0}, {d_buy, -spec.participants[p].import_limit(t)}},
                      RowSense::LessEqual, 0.0);
      problem.add_row("export_cap_" + tag,
                      {{sell, 1.0}, {d_sell, -spec.participants[p].export_limit(t)}},
                      RowSense::LessEqual, 0.0);
    }
  }
}

void add_battery(CommunityModel& model, const CommunitySpec& spec) {
  const auto& index = model.index;
  auto& problem = model.problem;
  const BessSpec& bess = spec.bess;
  for (std::size_t t = 0; t < model.hours; ++t) {
    const std::string tag = std::to_string(t);
    const std::size_t ch = index.at(VarKind::SigmaCh, t);
    const std::size_t dis = index.at(VarKind::SigmaDis, t);
    // soc[t] - soc[t-1] - eta_ch ch + dis / eta_dis = 0, soc[-1] = soc_initial
    std::vector<Term> terms{{index.at(VarKind::Soc, t), 1.0},
                            {ch, -bess.eta_ch},
                            {dis, 1.0 / bess.eta_dis}};
    double rhs = 0.0;
    if (t == 0) {
      rhs = bess.soc_initial_kwh;
    } else {
      terms.push_back({index.at(VarKind::Soc, t - 1), -1.0});
    }
    problem.add_row("soc_dyn_" + tag, std::move(terms), RowSense::Equal, rhs);
  }
  problem.add_row("soc_final", {{index.at(VarKind::Soc, model.hours - 1), 1.0}}, RowSense::Equal,
                  bess.soc_final_kwh);
  for (std::size_t t = 0; t < model.hours; ++t) {
    const std::string tag = std::to_string(t);
    const std::size_t ch = index.at(VarKind::SigmaCh, t);
    const std::size_t dis = index.at(VarKind::SigmaDis, t);
    const std::size_t d_ch = index.at(VarKind::DeltaCh, t);
    const std::size_t d_dis = index.at(VarKind::DeltaDis, t);
    problem.add_row("charge_cap_" + tag, {{ch, 1.0}, {d_ch, -bess.p_ch_max_kw}},
                    RowSense::LessEqual, 0.0);
    problem.add_row("discharge_cap_" + tag, {{dis, 1.0}, {d_dis, -bess.p_dis_max_kw}},
                    RowSense::LessEqual, 0.0);
    problem.add_row("battery_excl_" + tag, {{d_ch, 1.0}, {d_dis, 1.0}}, RowSense::LessEqual, 1.0);
  }
}

void add_sharing(CommunityModel& model, const CommunitySpec& spec) {
  if (model.sharing != SharingStrategy::OptimizeHourlyAllocation) return;
  const auto& index = model.index;
  auto& problem = model.problem;
  const BessSpec& bess = spec.bess;
  for (std::size_t t = 0; t < model.hours; ++t) {
    const std::string tag = std::to_string(t);
    // sum_p alloc = pv + dis - ch
    std::vector<Term> terms;
    for (std::size_t p = 0; p < spec.participants.size(); ++p) {
      terms.push_back({index.at(VarKind::Alloc, t, p), 1.0});
    }
    terms.push_back({index.at(VarKind::SigmaDis, t), -1.0});
    terms.push_back({index.at(VarKind::SigmaCh, t), 1.0});
    problem.add_row("share_" + tag, std::move(terms), RowSense::Equal, spec.pv.generation_kwh[t]);

    // All allocations share the sign of the net generation, which together
    // with the sum row keeps every implied coefficient inside [0, 1].
    const std::size_t sign = index.at(VarKind::DeltaShare, t);
    const double upper = spec.pv.generation_kwh[t] + bess.p_dis_max_kw;
    const double lower = bess.p_ch_max_kw;
    for (std::size_t p = 0; p < spec.participants.size(); ++p) {
      const std::string ptag = tag + "_" + std::to_string(p);
      const std::size_t alloc = index.at(VarKind::Alloc, t, p);
      problem.add_row("alloc_pos_" + ptag, {{alloc, 1.0}, {sign, -upper}}, RowSense::LessEqual,
                      0.0);
      problem.add_row("alloc_neg_" + ptag, {{alloc, 1.0}, {sign, -lower}}, RowSense::GreaterEqual,
                      -lower);
    }
  }
}

void add_compensation_cap(CommunityModel& model, const CommunitySpec& spec) {
  if (!spec.compensation_cap_enabled) return;
  const auto& index = model.index;
  for (std::size_t p = 0; p < spec.participants.size(); ++p) {
    const Participant& part = spec.participants[p];
    std::vector<Term> terms;
    for (std::size_t t = 0; t < model.hours; ++t) {
      terms.push_back({index.at(VarKind::ChiSell, t, p), part.sell_price[t]});
      terms.push_back({index.at(VarKind::ChiBuy, t, p), -part.buy_price[t]});
    }
    model.problem.add_row("compensation_cap_" + std::to_string(p), std::move(terms),
                          RowSense::LessEqual, 0.0);
  }
}

void set_price_objective(CommunityModel& model, const CommunitySpec& spec) {
  auto& problem = model.problem;
  const auto& index = model.index;
  for (std::size_t j = 0; j < problem.num_columns(); ++j) problem.set_cost(j, 0.0);
  for (std::size_t t = 0; t < model.hours; ++t) {
    for (std::size_t p = 0; p < spec.participants.size(); ++p) {
      problem.set_cost(index.at(VarKind::ChiBuy, t, p), spec.participants[p].buy_price[t]);
      problem.set_cost(index.at(VarKind::ChiSell, t, p), -spec.participants[p].sell_price[t]);
    }
    problem.set_cost(index.at(VarKind::SigmaCh, t), spec.bess.throughput_cost_per_kwh);
    problem.set_cost(index.at(VarKind::SigmaDis, t), spec.bess.throughput_cost_per_kwh);
  }
  problem.set_objective_constant(spec.bess.calendar_cost_per_hour *
                                 static_cast<double>(model.hours));
}

void set_environment_objective(CommunityModel& model, const CommunitySpec& spec) {
  auto& problem = model.problem;
  const auto& index = model.index;
  for (std::size_t j = 0; j < problem.num_columns(); ++j) problem.set_cost(j, 0.0);
  double pv_emissions = 0.0;
  for (std::size_t t = 0; t < model.hours; ++t) {
    for (std::size_t p = 0; p < spec.participants.size(); ++p) {
      problem.set_cost(index.at(VarKind::ChiBuy, t, p), spec.grid_intensity[t]);
    }
    problem.set_cost(index.at(VarKind::SigmaDis, t), spec.bess.emission_factor_discharge);
    pv_emissions += spec.pv.emission_factor * spec.pv.generation_kwh[t];
  }
  problem.set_objective_constant(pv_emissions);
}

CommunityModel build_model(const CommunitySpec& spec, Objective objective,
                           SharingStrategy sharing) {
  if (auto report = validate_community(spec); !report.empty()) {
    throw InvalidCommunity(std::move(report));
  }
  CommunityModel model = declare_variables(spec, objective, sharing);
  add_energy_balance(model, spec);
  add_exclusivity(model, spec);
  add_battery(model, spec);
  add_sharing(model, spec);
  add_compensation_cap(model, spec);
  if (objective == Objective::Price) {
    set_price_objective(model, spec);
  } else {
    set_environment_objective(model, spec);
  }
  model.problem.check_well_formed();
  return model;
}

std::vector<double> net_generation(const CommunityModel& model, const CommunitySpec& spec,
                                   const std::vector<double>& values) {
  std::vector<double> theta(model.hours);
  for (std::size_t t = 0; t < model.hours; ++t) {
    theta[t] = spec.pv.generation_kwh[t] + values[model.index.at(VarKind::SigmaDis, t)] -
               values[model.index.at(VarKind::SigmaCh, t)];
  }
  return theta;
}

std::vector<std::vector<double>> allocated_generation(const CommunityModel& model,
                                                      const CommunitySpec& spec,
                                                      const std::vector<double>& values) {
  const std::size_t parts = spec.participants.size();
  std::vector<std::vector<double>> out(model.hours, std::vector<double>(parts, 0.0));
  if (model.sharing == SharingStrategy::OptimizeHourlyAllocation) {
    for (std::size_t t = 0; t < model.hours; ++t) {
      for (std::size_t p = 0; p < parts; ++p) out[t][p] = values[model.index.at(VarKind::Alloc, t, p)];
    }
    return out;
  }
  const auto theta = net_generation(model, spec, values);
  for (std::size_t t = 0; t < model.hours; ++t) {
    for (std::size_t p = 0; p < parts; ++p) out[t][p] = model.beta[t][p] * theta[t];
  }
  return out;
}

std::vector<std::vector<double>> effective_coefficients(const CommunityModel& model,
                                                        const CommunitySpec& spec,
                                                        const std::vector<double>& values) {
  if (model.sharing == SharingStrategy::FixedCoefficients) return model.beta;
  const std::size_t parts = spec.participants.size();
  const auto theta = net_generation(model, spec, values);
  std::vector<std::vector<double>> beta(model.hours, std::vector<double>(parts, 0.0));
  for (std::size_t t = 0; t < model.hours; ++t) {
    if (std::abs(theta[t]) <= kZeroNetGeneration) {
      beta[t] = spec.sharing.static_coefficients;
      continue;
    }
    // Normalize by the allocated total so solver round-off cannot push the
    // coefficient sum away from one.
    double total = 0.0;
    for (std::size_t p = 0; p < parts; ++p) {
      beta[t][p] = std::clamp(values[model.index.at(VarKind::Alloc, t, p)] / theta[t], 0.0, 1.0);
      total += beta[t][p];
    }
    for (auto& b : beta[t]) b /= total;
  }
  return beta;
}

}  // namespace lecopt
