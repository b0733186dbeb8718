#include "smdp/scheduler.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "smdp/error.hpp"
#include "smdp/graph.hpp"

namespace smdp {

AsyncScheduler AsyncScheduler::synchronous(std::size_t dim) {
  if (dim == 0) throw ParameterError("scheduler needs dim > 0");
  return AsyncScheduler(SchedulerKind::Synchronous, dim);
}

AsyncScheduler AsyncScheduler::uniform_random(std::size_t dim, std::size_t k) {
  if (dim == 0 || k == 0 || k > dim)
    throw ParameterError("uniform_random scheduler needs 1 <= k <= dim");
  AsyncScheduler s(SchedulerKind::UniformRandom, dim);
  s.k_ = k;
  return s;
}

AsyncScheduler AsyncScheduler::round_robin(std::size_t dim) {
  if (dim == 0) throw ParameterError("scheduler needs dim > 0");
  return AsyncScheduler(SchedulerKind::RoundRobin, dim);
}

AsyncScheduler AsyncScheduler::markov_chain(std::vector<std::vector<double>> matrix,
                                            std::size_t start) {
  const std::size_t d = matrix.size();
  if (d == 0) throw ParameterError("Markov-chain scheduler needs a nonempty matrix");
  if (start >= d) throw ParameterError("Markov-chain scheduler start out of range");
  graph::Adjacency adj(d);
  for (std::size_t i = 0; i < d; ++i) {
    if (matrix[i].size() != d) throw ParameterError("Markov-chain matrix must be square");
    double sum = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      const double p = matrix[i][j];
      if (!(p >= 0.0) || !std::isfinite(p))
        throw ParameterError("Markov-chain matrix entries must be finite and nonnegative");
      if (p > 0.0) adj[i].push_back(j);
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-12)
      throw ParameterError("Markov-chain matrix row " + std::to_string(i) + " sums to " +
                           std::to_string(sum));
    for (double& p : matrix[i]) p /= sum;
  }
  if (!graph::is_irreducible(adj)) throw ParameterError("Markov-chain matrix is not irreducible");

  AsyncScheduler s(SchedulerKind::MarkovChain, d);
  s.start_ = start;
  s.cumulative_.resize(d);
  for (std::size_t i = 0; i < d; ++i) {
    s.cumulative_[i].resize(d);
    std::partial_sum(matrix[i].begin(), matrix[i].end(), s.cumulative_[i].begin());
    s.cumulative_[i].back() = 1.0;
  }
  s.matrix_ = std::move(matrix);
  return s;
}

AsyncScheduler AsyncScheduler::uniform_chain(std::size_t dim) {
  if (dim == 0) throw ParameterError("scheduler needs dim > 0");
  return markov_chain(std::vector<std::vector<double>>(
      dim, std::vector<double>(dim, 1.0 / static_cast<double>(dim))));
}

std::string AsyncScheduler::describe() const {
  switch (kind_) {
    case SchedulerKind::Synchronous:
      return "synchronous";
    case SchedulerKind::UniformRandom:
      return "uniform_random(k=" + std::to_string(k_) + ")";
    case SchedulerKind::RoundRobin:
      return "round_robin";
    case SchedulerKind::MarkovChain:
      return "markov_chain(start=" + std::to_string(start_) + ")";
  }
  return "?";
}

std::vector<std::size_t> next_update_set(const AsyncScheduler& sched, SchedulerState& state,
                                         SeededRng& rng) {
  const std::size_t d = sched.dim();
  std::vector<std::size_t> y;
  switch (sched.kind()) {
    case SchedulerKind::Synchronous:
      y.resize(d);
      std::iota(y.begin(), y.end(), 0);
      break;
    case SchedulerKind::RoundRobin:
      if (!state.started) state.current = 0;
      else state.current = (state.current + 1) % d;
      y.push_back(state.current);
      break;
    case SchedulerKind::UniformRandom: {
      // Partial Fisher-Yates over the index range.
      std::vector<std::size_t> pool(d);
      std::iota(pool.begin(), pool.end(), 0);
      for (std::size_t j = 0; j < sched.k(); ++j) {
        const auto r = j + static_cast<std::size_t>(rng.below(d - j));
        std::swap(pool[j], pool[r]);
      }
      y.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(sched.k()));
      std::sort(y.begin(), y.end());
      break;
    }
    case SchedulerKind::MarkovChain: {
      if (!state.started) {
        state.current = sched.start();
      } else {
        const auto& row = sched.cumulative()[state.current];
        const double u = rng.uniform();
        state.current = static_cast<std::size_t>(
            std::upper_bound(row.begin(), row.end(), u) - row.begin());
        if (state.current >= d) state.current = d - 1;
      }
      y.push_back(state.current);
      break;
    }
  }
  state.started = true;
  ++state.steps;
  return y;
}

void UpdateCounters::record(const std::vector<std::size_t>& y) {
  for (std::size_t i : y) {
    if (i >= nu.size()) throw DomainError("update set index out of range");
    ++nu[i];
  }
  ++n;
}

AsynchronyReport asynchrony_diagnostics(const std::vector<UpdateCounters>& checkpoints,
                                        double gamma) {
  if (checkpoints.empty()) throw DomainError("asynchrony diagnostics need at least one snapshot");
  AsynchronyReport rep;
  for (const auto& c : checkpoints) {
    if (c.n == 0) throw DomainError("asynchrony diagnostics need n >= 1");
    std::vector<double> r(c.nu.size());
    for (std::size_t i = 0; i < r.size(); ++i)
      r[i] = static_cast<double>(c.nu[i]) / static_cast<double>(c.n);
    rep.ratios.push_back(std::move(r));
  }
  rep.terminal_ratio = rep.ratios.back();
  rep.min_ratio = rep.terminal_ratio.empty()
                      ? 0.0
                      : *std::min_element(rep.terminal_ratio.begin(), rep.terminal_ratio.end());
  for (std::size_t k = 0; k < checkpoints.size(); ++k) {
    const double scale = std::pow(static_cast<double>(checkpoints[k].n), gamma);
    std::vector<double> d(rep.terminal_ratio.size());
    for (std::size_t i = 0; i < d.size(); ++i) {
      d[i] = scale * std::abs(rep.ratios[k][i] - rep.terminal_ratio[i]);
      rep.max_drift = std::max(rep.max_drift, d[i]);
    }
    rep.drift.push_back(std::move(d));
  }
  return rep;
}

}  // namespace smdp
