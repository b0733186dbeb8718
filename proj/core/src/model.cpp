#include "smdp/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "smdp/error.hpp"

namespace smdp {

SmdpModel::SmdpModel(std::size_t num_states, std::size_t num_actions,
                     std::vector<TransitionLaw> laws)
    : num_states_(num_states), num_actions_(num_actions), laws_(std::move(laws)) {
  if (num_states == 0 || num_actions == 0)
    throw ModelError("model needs at least one state and one action");
  if (laws_.size() != num_states * num_actions)
    throw ModelError("transition law must be given for every state-action pair (expected " +
                     std::to_string(num_states * num_actions) + ", got " +
                     std::to_string(laws_.size()) + ")");

  const std::size_t d = laws_.size();
  expect_.r.assign(d, 0.0);
  expect_.t.assign(d, 0.0);
  expect_.p.assign(d, std::vector<double>(num_states, 0.0));

  for (std::size_t i = 0; i < d; ++i) {
    const std::string where =
        "pair (s=" + std::to_string(i / num_actions) + ", a=" + std::to_string(i % num_actions) + ")";
    auto& branches = laws_[i].branches;
    if (branches.empty()) throw ModelError(where + ": no branches");
    double total = 0.0;
    for (Branch& b : branches) {
      if (!(b.prob > 0.0 && b.prob <= 1.0))
        throw ModelError(where + ": branch probability must lie in (0, 1]");
      if (b.next >= num_states) throw ModelError(where + ": next state out of range");
      try {
        validate(b.holding);
        validate(b.reward);
      } catch (const ModelError& e) {
        throw ModelError(where + ": " + e.what());
      }
      total += b.prob;
    }
    if (std::abs(total - 1.0) > 1e-12)
      throw ModelError(where + ": branch probabilities sum to " + std::to_string(total));
    if (std::abs(total - 1.0) > 1e-15)
      for (Branch& b : branches) b.prob /= total;

    for (const Branch& b : branches) {
      expect_.r[i] += b.prob * mean(b.reward);
      expect_.t[i] += b.prob * mean(b.holding);
      expect_.p[i][b.next] += b.prob;
    }
    if (!(expect_.t[i] > 0.0)) throw ModelError(where + ": expected holding time is zero");
  }
  t_min_ = *std::min_element(expect_.t.begin(), expect_.t.end());
}

std::size_t SmdpModel::pair_index(StateId s, ActionId a) const {
  if (s >= num_states_ || a >= num_actions_)
    throw DomainError("state-action pair (" + std::to_string(s) + ", " + std::to_string(a) +
                      ") out of range");
  return s * num_actions_ + a;
}

const TransitionLaw& SmdpModel::law(StateId s, ActionId a) const {
  return laws_[pair_index(s, a)];
}

TransitionSample sample_transition(const SmdpModel& model, StateId s, ActionId a,
                                   SeededRng& rng) {
  const TransitionLaw& law = model.law(s, a);
  const Branch* chosen = &law.branches.back();
  if (law.branches.size() > 1) {
    double u = rng.uniform();
    for (const Branch& b : law.branches) {
      if (u < b.prob) {
        chosen = &b;
        break;
      }
      u -= b.prob;
    }
  }
  TransitionSample out;
  out.next = chosen->next;
  out.tau = sample(chosen->holding, rng);
  out.reward = sample(chosen->reward, rng);
  return out;
}

ModelExpectations model_expectations(const SmdpModel& model) {
  for (double t : model.expectations().t)
    if (!(t > 0.0)) throw ModelError("model has a pair with zero expected holding time");
  return model.expectations();
}

AssumptionReport check_model_assumptions(const SmdpModel& model) {
  AssumptionReport rep;
  double threshold = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < model.num_pairs(); ++i) {
    PairMoments pm{i, 0.0, 0.0, 0.0, 0.0, 0.0};
    double pair_threshold = 0.0;
    for (const Branch& b : model.laws()[i].branches) {
      pm.holding_mean += b.prob * mean(b.holding);
      pm.holding_second_moment += b.prob * second_moment(b.holding);
      pm.reward_mean += b.prob * mean(b.reward);
      pm.reward_second_moment += b.prob * second_moment(b.reward);
      pair_threshold = std::max(pair_threshold, positive_mass_threshold(b.holding));
    }
    pm.positive_mass_threshold = pair_threshold;
    threshold = std::min(threshold, pair_threshold);
    const std::string where = "pair " + std::to_string(i);
    if (!(pair_threshold > 0.0)) rep.violations.push_back(where + ": all holding mass at zero");
    if (!std::isfinite(pm.holding_second_moment))
      rep.violations.push_back(where + ": infinite holding second moment");
    if (!std::isfinite(pm.reward_second_moment))
      rep.violations.push_back(where + ": infinite reward second moment");
    rep.pairs.push_back(pm);
  }
  rep.holds = rep.violations.empty();
  // Any eps strictly below the smallest threshold works; exponential laws put
  // mass beyond every point, so cap at 1.
  rep.epsilon = std::isfinite(threshold) ? threshold / 2.0 : 1.0;
  return rep;
}

std::vector<double> state_values(const SmdpModel& model, std::span<const double> q) {
  const std::size_t na = model.num_actions();
  std::vector<double> v(model.num_states());
  for (std::size_t s = 0; s < v.size(); ++s) {
    double m = q[s * na];
    for (std::size_t a = 1; a < na; ++a) m = std::max(m, q[s * na + a]);
    v[s] = m;
  }
  return v;
}

}  // namespace smdp
