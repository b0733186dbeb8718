#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "smdp/distributions.hpp"
#include "smdp/rng.hpp"

namespace smdp {

using StateId = std::size_t;
using ActionId = std::size_t;

struct Branch {
  double prob;
  StateId next;
  HoldingTimeDist holding;
  RewardDist reward;
  bool operator==(const Branch&) const = default;
};

struct TransitionLaw {
  std::vector<Branch> branches;
  bool operator==(const TransitionLaw&) const = default;
};

/// One realised transition out of a state-action pair.
struct TransitionSample {
  StateId next;
  double tau;
  double reward;
};

/// Closed-form model expectations, flattened over pairs i = s * |A| + a.
struct ModelExpectations {
  std::vector<double> r;  // r_sa
  std::vector<double> t;  // t_sa
  /// p[i][s'] = P(S = s' | pair i)
  std::vector<std::vector<double>> p;
};

/// A stationary deterministic policy: one action per state.
struct DeterministicPolicy {
  std::vector<ActionId> actions;
  bool operator==(const DeterministicPolicy&) const = default;
};

/// Finite SMDP with all actions admissible in every state. Immutable after
/// construction; derived tables are computed and validated once.
class SmdpModel {
 public:
  /// laws[s * num_actions + a]. Throws ModelError on any invalid entry;
  /// branch probabilities are checked to 1e-12 and renormalised.
  SmdpModel(std::size_t num_states, std::size_t num_actions,
            std::vector<TransitionLaw> laws);

  std::size_t num_states() const noexcept { return num_states_; }
  std::size_t num_actions() const noexcept { return num_actions_; }
  std::size_t num_pairs() const noexcept { return laws_.size(); }

  std::size_t pair_index(StateId s, ActionId a) const;
  StateId state_of(std::size_t pair) const noexcept { return pair / num_actions_; }
  ActionId action_of(std::size_t pair) const noexcept { return pair % num_actions_; }

  const TransitionLaw& law(StateId s, ActionId a) const;
  const std::vector<TransitionLaw>& laws() const noexcept { return laws_; }

  const ModelExpectations& expectations() const noexcept { return expect_; }
  double expected_reward(std::size_t pair) const { return expect_.r.at(pair); }
  double expected_holding(std::size_t pair) const { return expect_.t.at(pair); }
  double t_min() const noexcept { return t_min_; }

 private:
  std::size_t num_states_;
  std::size_t num_actions_;
  std::vector<TransitionLaw> laws_;
  ModelExpectations expect_;
  double t_min_ = 0.0;
};

/// Draws (S', tau, R) from P_sa. Throws DomainError for invalid (s, a).
TransitionSample sample_transition(const SmdpModel& model, StateId s, ActionId a,
                                   SeededRng& rng);

ModelExpectations model_expectations(const SmdpModel& model);

/// Per-pair moments used by the model-check report.
struct PairMoments {
  std::size_t pair;
  double holding_mean;
  double holding_second_moment;
  double reward_mean;
  double reward_second_moment;
  double positive_mass_threshold;
};

struct AssumptionReport {
  bool holds = true;
  /// An eps > 0 with P_sa(tau <= eps) < 1 for every pair.
  double epsilon = 0.0;
  std::vector<PairMoments> pairs;
  std::vector<std::string> violations;
};

/// Checks non-degenerate holding times and finite second moments.
AssumptionReport check_model_assumptions(const SmdpModel& model);

/// Maximum of q(s, .) over actions, for every state.
std::vector<double> state_values(const SmdpModel& model, std::span<const double> q);

}  // namespace smdp
