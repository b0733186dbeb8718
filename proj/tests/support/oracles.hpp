#pragma once

// Brute-force reference implementations, deliberately independent of the
// library's graph and linear-algebra code.

#include <cmath>
#include <deque>
#include <vector>

#include "smdp/model.hpp"

namespace smdp::testing {

inline std::vector<bool> reachable_from(const std::vector<std::vector<bool>>& edge, std::size_t s) {
  std::vector<bool> seen(edge.size(), false);
  std::deque<std::size_t> todo{s};
  seen[s] = true;
  while (!todo.empty()) {
    const auto u = todo.front();
    todo.pop_front();
    for (std::size_t v = 0; v < edge.size(); ++v)
      if (edge[u][v] && !seen[v]) {
        seen[v] = true;
        todo.push_back(v);
      }
  }
  return seen;
}

inline std::vector<std::vector<bool>> policy_edges(const SmdpModel& m, const std::vector<ActionId>& pi) {
  const std::size_t n = m.num_states();
  std::vector<std::vector<bool>> e(n, std::vector<bool>(n, false));
  for (StateId s = 0; s < n; ++s)
    for (const auto& b : m.law(s, pi[s]).branches)
      if (b.prob > 0.0) e[s][b.next] = true;
  return e;
}

/// Recurrent states of a finite chain: s is recurrent iff every state
/// reachable from s reaches s back.
inline std::vector<bool> recurrent_states(const std::vector<std::vector<bool>>& edge) {
  const std::size_t n = edge.size();
  std::vector<std::vector<bool>> reach(n);
  for (std::size_t s = 0; s < n; ++s) reach[s] = reachable_from(edge, s);
  std::vector<bool> rec(n, true);
  for (std::size_t s = 0; s < n; ++s)
    for (std::size_t t = 0; t < n; ++t)
      if (reach[s][t] && !reach[t][s]) rec[s] = false;
  return rec;
}

/// Calls fn(policy) for every deterministic stationary policy.
template <class Fn>
void for_each_policy(const SmdpModel& m, Fn&& fn) {
  std::vector<ActionId> pi(m.num_states(), 0);
  for (;;) {
    fn(pi);
    std::size_t s = 0;
    while (s < pi.size() && ++pi[s] == m.num_actions()) pi[s++] = 0;
    if (s == pi.size()) return;
  }
}

/// Weak communication by enumeration: U = states recurrent under some
/// deterministic policy; the model is weakly communicating iff the set of
/// states reachable from U in the "some action" graph is strongly connected.
inline bool weakly_communicating_oracle(const SmdpModel& m) {
  const std::size_t n = m.num_states();
  std::vector<bool> u(n, false);
  for_each_policy(m, [&](const std::vector<ActionId>& pi) {
    const auto rec = recurrent_states(policy_edges(m, pi));
    for (std::size_t s = 0; s < n; ++s) u[s] = u[s] || rec[s];
  });
  std::vector<std::vector<bool>> any(n, std::vector<bool>(n, false));
  for (StateId s = 0; s < n; ++s)
    for (ActionId a = 0; a < m.num_actions(); ++a)
      for (const auto& b : m.law(s, a).branches)
        if (b.prob > 0.0) any[s][b.next] = true;
  std::vector<bool> closure(n, false);
  for (std::size_t s = 0; s < n; ++s)
    if (u[s]) {
      const auto r = reachable_from(any, s);
      for (std::size_t t = 0; t < n; ++t) closure[t] = closure[t] || r[t];
    }
  for (std::size_t s = 0; s < n; ++s) {
    if (!closure[s]) continue;
    const auto r = reachable_from(any, s);
    for (std::size_t t = 0; t < n; ++t)
      if (closure[t] && !r[t]) return false;
  }
  return true;
}

/// Stationary distribution by power iteration on the lazy chain
/// (P + I) / 2 started from the uniform law on `cls`.
inline std::vector<double> stationary_by_power(const std::vector<std::vector<double>>& p,
                                               const std::vector<StateId>& cls) {
  const std::size_t n = p.size();
  std::vector<double> mu(n, 0.0), next(n);
  for (auto s : cls) mu[s] = 1.0 / static_cast<double>(cls.size());
  for (int it = 0; it < 100'000; ++it) {
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t s = 0; s < n; ++s)
      for (std::size_t t = 0; t < n; ++t) next[t] += 0.5 * mu[s] * (p[s][t] + (s == t ? 1.0 : 0.0));
    double diff = 0.0;
    for (std::size_t s = 0; s < n; ++s) diff = std::max(diff, std::abs(next[s] - mu[s]));
    mu.swap(next);
    if (diff < 1e-14) break;
  }
  return mu;
}

}  // namespace smdp::testing
