#pragma once

// Community scheduling model: turns a validated CommunitySpec and a scenario
// choice into a MilpProblem.

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "lecopt/domain.hpp"
#include "lecopt/milp.hpp"

namespace lecopt {

enum class Objective { Price, Environment };
enum class SharingStrategy { FixedCoefficients, OptimizeHourlyAllocation };

std::string_view to_string(Objective objective);
std::string_view to_string(SharingStrategy sharing);
/// "price/static", "environment/variable", ...
std::string scenario_label(Objective objective, SharingStrategy sharing);

enum class VarKind {
  ChiBuy,      // grid import per participant, kWh
  ChiSell,     // grid export per participant, kWh
  DeltaBuy,    // import enable
  DeltaSell,   // export enable
  SigmaCh,     // battery charge, kWh
  SigmaDis,    // battery discharge, kWh
  DeltaCh,     // charge enable
  DeltaDis,    // discharge enable
  Soc,         // stored energy at the end of the hour, kWh
  Alloc,       // net generation allocated to a participant (optimized sharing)
  DeltaShare,  // 1 when the hour's net generation is non-negative (optimized sharing)
};

inline constexpr std::size_t kVarKindCount = 11;

bool is_per_participant(VarKind kind);
std::string_view var_kind_name(VarKind kind);

/// Bijection between (kind, hour, participant) and problem columns.
class VariableIndex {
 public:
  struct Key {
    VarKind kind;
    std::size_t hour;
    std::size_t participant;  // 0 for per-hour kinds
  };

  VariableIndex() = default;
  VariableIndex(std::size_t hours, std::size_t participants)
      : hours_(hours), participants_(participants) {}

  void assign(VarKind kind, std::size_t hour, std::size_t participant, std::size_t column);

  bool has(VarKind kind) const { return !slots_[static_cast<std::size_t>(kind)].empty(); }
  /// Column for a variable; throws std::out_of_range when absent.
  std::size_t at(VarKind kind, std::size_t hour, std::size_t participant = 0) const;
  const Key& key(std::size_t column) const { return keys_.at(column); }
  std::size_t size() const { return keys_.size(); }

  std::size_t hours() const { return hours_; }
  std::size_t participants() const { return participants_; }

  static std::string column_name(VarKind kind, std::size_t hour, std::size_t participant);

 private:
  std::size_t slot(VarKind kind, std::size_t hour, std::size_t participant) const;

  std::size_t hours_ = 0;
  std::size_t participants_ = 0;
  std::vector<std::size_t> slots_[kVarKindCount];
  std::vector<Key> keys_;  // by column
};

struct CommunityModel {
  MilpProblem problem;
  VariableIndex index;
  Objective objective = Objective::Price;
  SharingStrategy sharing = SharingStrategy::FixedCoefficients;
  std::size_t hours = 0;
  std::vector<std::string> participant_ids;
  // Fixed sharing coefficients by [hour][participant]; empty when optimized.
  std::vector<std::vector<double>> beta;
};

class InvalidCommunity : public std::invalid_argument {
 public:
  explicit InvalidCommunity(ValidationReport report);
  const ValidationReport& report() const { return report_; }

 private:
  ValidationReport report_;
};

/// Full model: variables, every constraint family and the chosen objective.
/// Throws InvalidCommunity when validate_community reports violations.
CommunityModel build_model(const CommunitySpec& spec, Objective objective,
                           SharingStrategy sharing);

// Individual construction steps, in the order build_model applies them.
// Exposed for tests that audit one family at a time.
CommunityModel declare_variables(const CommunitySpec& spec, Objective objective,
                                 SharingStrategy sharing);
void add_energy_balance(CommunityModel& model, const CommunitySpec& spec);
void add_exclusivity(CommunityModel& model, const CommunitySpec& spec);
void add_battery(CommunityModel& model, const CommunitySpec& spec);
void add_sharing(CommunityModel& model, const CommunitySpec& spec);
void add_compensation_cap(CommunityModel& model, const CommunitySpec& spec);
void set_price_objective(CommunityModel& model, const CommunitySpec& spec);
void set_environment_objective(CommunityModel& model, const CommunitySpec& spec);

/// Net community generation per hour: PV + discharge - charge.
std::vector<double> net_generation(const CommunityModel& model, const CommunitySpec& spec,
                                   const std::vector<double>& values);

/// Net generation attributed to each participant, [hour][participant].
std::vector<std::vector<double>> allocated_generation(const CommunityModel& model,
                                                      const CommunitySpec& spec,
                                                      const std::vector<double>& values);

/// Sharing coefficients in effect, [hour][participant]. With optimized
/// allocation they are recovered as allocation / net generation; hours with
/// zero net generation fall back to the static coefficients.
std::vector<std::vector<double>> effective_coefficients(const CommunityModel& model,
                                                        const CommunitySpec& spec,
                                                        const std::vector<double>& values);

/// Deterministic CPLEX-LP text. The scenario label is written as a comment.
std::string export_lp_text(const MilpProblem& problem);

}  // namespace lecopt
