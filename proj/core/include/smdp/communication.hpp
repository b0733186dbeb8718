#pragma once

#include <string>
#include <variant>
#include <vector>

#include "smdp/model.hpp"

namespace smdp {

struct WeaklyCommunicating {
  std::vector<StateId> closed_class;
  std::vector<StateId> transient;
};

struct NotWeaklyCommunicating {
  /// Human-readable reason, plus the offending state sets.
  std::string witness;
  std::vector<std::vector<StateId>> closed_classes;
  /// States outside the closed class that some policy can keep forever.
  std::vector<StateId> trapping_states;
};

using CommunicationClass = std::variant<WeaklyCommunicating, NotWeaklyCommunicating>;

/// Exactly one closed SCC C in the "some action" graph, and no nonempty set
/// outside C that a policy can keep closed (per-action support fixed point).
CommunicationClass classify_communication(const SmdpModel& model);

inline bool is_weakly_communicating(const CommunicationClass& c) {
  return std::holds_alternative<WeaklyCommunicating>(c);
}

struct InducedChain {
  /// Row-stochastic P(s, s') = p_{ss'}^{pi(s)}.
  std::vector<std::vector<double>> transition;
  std::vector<std::vector<StateId>> recurrent_classes;
  /// stationary[k] has length |S| and is supported on recurrent_classes[k].
  std::vector<std::vector<double>> stationary;
};

/// Throws NumericalError (with reciprocal condition estimate) when a
/// stationary solve is singular.
InducedChain induced_chain(const SmdpModel& model, const DeterministicPolicy& policy);

}  // namespace smdp
