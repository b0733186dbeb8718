#include "smdp/gain_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "smdp/error.hpp"

namespace smdp {

double PolicyGain::min_gain() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& c : classes) m = std::min(m, c.gain);
  return m;
}

double PolicyGain::max_gain() const {
  double m = -std::numeric_limits<double>::infinity();
  for (const auto& c : classes) m = std::max(m, c.gain);
  return m;
}

double class_gain(const SmdpModel& model, const DeterministicPolicy& policy,
                  const std::vector<double>& stationary) {
  double num = 0.0;
  double den = 0.0;
  for (StateId s = 0; s < stationary.size(); ++s) {
    if (stationary[s] == 0.0) continue;
    const std::size_t i = model.pair_index(s, policy.actions.at(s));
    num += stationary[s] * model.expected_reward(i);
    den += stationary[s] * model.expected_holding(i);
  }
  return num / den;
}

PolicyGain evaluate_policy(const SmdpModel& model, const DeterministicPolicy& policy) {
  if (policy.actions.size() != model.num_states())
    throw DomainError("policy must assign one action per state");
  const auto chain = induced_chain(model, policy);
  PolicyGain pg{policy, {}};
  for (std::size_t k = 0; k < chain.recurrent_classes.size(); ++k)
    pg.classes.push_back(
        {chain.recurrent_classes[k], class_gain(model, policy, chain.stationary[k])});
  return pg;
}

GainOracleResult gain_oracle(const SmdpModel& model, std::size_t budget) {
  const std::size_t ns = model.num_states();
  const std::size_t na = model.num_actions();
  std::size_t count = 1;
  for (std::size_t s = 0; s < ns; ++s) {
    if (count > budget / na)
      throw BudgetError("gain oracle: |A|^|S| exceeds the enumeration budget of " +
                        std::to_string(budget));
    count *= na;
  }

  GainOracleResult res;
  res.per_policy.reserve(count);
  res.rstar = -std::numeric_limits<double>::infinity();
  DeterministicPolicy pi{std::vector<ActionId>(ns, 0)};
  for (std::size_t k = 0; k < count; ++k) {
    res.per_policy.push_back(evaluate_policy(model, pi));
    res.rstar = std::max(res.rstar, res.per_policy.back().max_gain());
    // Odometer increment, state 0 fastest.
    for (std::size_t s = 0; s < ns; ++s) {
      if (++pi.actions[s] < na) break;
      pi.actions[s] = 0;
    }
  }
  for (const auto& pg : res.per_policy)
    if (pg.min_gain() >= res.rstar - 1e-9) res.optimal_policies.push_back(pg.policy);
  return res;
}

}  // namespace smdp
