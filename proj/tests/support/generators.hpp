#pragma once

// Hand-rolled random generators for property tests. Every generator takes an
// explicit SeededRng so failures replay from the printed seed.

#include <algorithm>
#include <cstddef>
#include <vector>

#include "smdp/model.hpp"
#include "smdp/rate_function.hpp"
#include "smdp/rng.hpp"

namespace smdp::testing {

inline std::size_t pick(SeededRng& rng, std::size_t lo, std::size_t hi) {
  return lo + static_cast<std::size_t>(rng.below(hi - lo + 1));
}

inline double between(SeededRng& rng, double lo, double hi) { return lo + (hi - lo) * rng.uniform(); }

inline std::vector<double> random_vector(SeededRng& rng, std::size_t d, double radius) {
  std::vector<double> x(d);
  for (double& v : x) v = between(rng, -radius, radius);
  return x;
}

inline HoldingTimeDist random_holding(SeededRng& rng) {
  switch (rng.below(3)) {
    case 0:
      return holding::Deterministic{between(rng, 0.2, 3.0)};
    case 1:
      return holding::Exponential{between(rng, 0.3, 4.0)};
    default: {
      holding::Discrete d;
      const std::size_t k = pick(rng, 1, 3);
      for (std::size_t i = 0; i < k; ++i) d.atoms.push_back({1.0 / static_cast<double>(k), between(rng, 0.1, 3.0)});
      return d;
    }
  }
}

inline RewardDist random_reward(SeededRng& rng) {
  switch (rng.below(3)) {
    case 0:
      return reward::Deterministic{between(rng, -2.0, 5.0)};
    case 1:
      return reward::Gaussian{between(rng, -2.0, 5.0), between(rng, 0.0, 2.0)};
    default: {
      reward::Discrete d;
      d.atoms = {{0.25, between(rng, -3.0, 3.0)}, {0.75, between(rng, -3.0, 3.0)}};
      return d;
    }
  }
}

/// Random model with sparse supports: each pair moves to 1..min(3, |S|)
/// distinct successors. `deterministic` restricts every law to a single
/// branch with deterministic holding time and reward.
inline SmdpModel random_model(SeededRng& rng, std::size_t max_states = 4, std::size_t max_actions = 3,
                              bool deterministic = false) {
  const std::size_t ns = pick(rng, 1, max_states);
  const std::size_t na = pick(rng, 1, max_actions);
  std::vector<TransitionLaw> laws;
  for (std::size_t i = 0; i < ns * na; ++i) {
    TransitionLaw law;
    const std::size_t k = deterministic ? 1 : pick(rng, 1, std::min<std::size_t>(3, ns));
    std::vector<StateId> succ;
    while (succ.size() < k) {
      const StateId s = pick(rng, 0, ns - 1);
      if (std::find(succ.begin(), succ.end(), s) == succ.end()) succ.push_back(s);
    }
    std::vector<double> w(k);
    double total = 0.0;
    for (double& x : w) total += (x = between(rng, 0.1, 1.0));
    for (std::size_t j = 0; j < k; ++j) {
      if (deterministic)
        law.branches.push_back({1.0, succ[j], holding::Deterministic{between(rng, 0.5, 2.0)},
                                reward::Deterministic{between(rng, -1.0, 3.0)}});
      else
        law.branches.push_back({w[j] / total, succ[j], random_holding(rng), random_reward(rng)});
    }
    laws.push_back(std::move(law));
  }
  return SmdpModel(ns, na, std::move(laws));
}

/// Random member of the closed SISTr family, depth <= 2.
inline RateFunction random_rate_function(SeededRng& rng, std::size_t d, int depth = 2) {
  const auto kind = depth > 0 ? rng.below(4) : rng.below(3);
  auto subset = [&] {
    std::vector<std::size_t> s;
    for (std::size_t i = 0; i < d; ++i)
      if (rng.below(2) == 0) s.push_back(i);
    if (s.empty()) s.push_back(pick(rng, 0, d - 1));
    return s;
  };
  switch (kind) {
    case 0: {
      std::vector<double> theta(d);
      for (double& t : theta) t = between(rng, -0.3, 1.0);
      theta[pick(rng, 0, d - 1)] += 1.0;  // keeps the sum positive
      double sum = 0.0;
      for (double t : theta) sum += t;
      if (sum <= 0.0) theta[0] += 1.0 - sum;
      return RateFunction::affine(between(rng, -2.0, 2.0), theta);
    }
    case 1:
      return RateFunction::max_over(d, between(rng, -2.0, 2.0), between(rng, 0.2, 2.0), subset());
    case 2:
      return RateFunction::min_over(d, between(rng, -2.0, 2.0), between(rng, 0.2, 2.0), subset());
    default: {
      const std::size_t m = pick(rng, 2, 3);
      std::vector<RateFunction> kids;
      for (std::size_t k = 0; k < m; ++k) kids.push_back(random_rate_function(rng, d, depth - 1));
      switch (rng.below(3)) {
        case 0: {
          std::vector<double> w(m);
          for (double& x : w) x = between(rng, 0.1, 1.0);
          return RateFunction::composite(Combinator::WeightedSum, std::move(kids), w);
        }
        case 1:
          return RateFunction::composite(Combinator::Max, std::move(kids));
        default:
          return RateFunction::composite(Combinator::Min, std::move(kids));
      }
    }
  }
}

}  // namespace smdp::testing
