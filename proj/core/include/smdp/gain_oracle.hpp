#pragma once

#include <cstddef>
#include <vector>

#include "smdp/communication.hpp"
#include "smdp/model.hpp"

namespace smdp {

struct ClassGain {
  std::vector<StateId> states;
  double gain;
};

struct PolicyGain {
  DeterministicPolicy policy;
  std::vector<ClassGain> classes;
  double min_gain() const;
  double max_gain() const;
};

struct GainOracleResult {
  double rstar = 0.0;
  std::vector<PolicyGain> per_policy;
  /// Policies whose every recurrent class attains rstar (within 1e-9).
  std::vector<DeterministicPolicy> optimal_policies;
};

/// Renewal-reward gain of a recurrent class: (sum mu r) / (sum mu t).
double class_gain(const SmdpModel& model, const DeterministicPolicy& policy,
                  const std::vector<double>& stationary);

/// Gain of one policy: every recurrent class with its renewal-reward rate.
PolicyGain evaluate_policy(const SmdpModel& model, const DeterministicPolicy& policy);

/// Enumerates all |A|^|S| deterministic stationary policies. Throws
/// BudgetError when that count exceeds `budget`.
GainOracleResult gain_oracle(const SmdpModel& model, std::size_t budget = 1'000'000);

}  // namespace smdp
