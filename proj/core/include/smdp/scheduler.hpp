#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "smdp/rng.hpp"

namespace smdp {

enum class SchedulerKind { Synchronous, UniformRandom, RoundRobin, MarkovChain };

/// Selection process producing the nonempty component set Y_n.
class AsyncScheduler {
 public:
  static AsyncScheduler synchronous(std::size_t dim);
  static AsyncScheduler uniform_random(std::size_t dim, std::size_t k);
  static AsyncScheduler round_robin(std::size_t dim);
  /// Rows must sum to 1 (1e-12) and the chain must be irreducible.
  static AsyncScheduler markov_chain(std::vector<std::vector<double>> matrix,
                                     std::size_t start = 0);
  /// Markov chain with every row uniform over all components.
  static AsyncScheduler uniform_chain(std::size_t dim);

  SchedulerKind kind() const noexcept { return kind_; }
  std::size_t dim() const noexcept { return dim_; }
  std::size_t k() const noexcept { return k_; }
  std::size_t start() const noexcept { return start_; }
  const std::vector<std::vector<double>>& matrix() const noexcept { return matrix_; }

  std::string describe() const;

 private:
  AsyncScheduler(SchedulerKind kind, std::size_t dim) : kind_(kind), dim_(dim) {}
  SchedulerKind kind_;
  std::size_t dim_;
  std::size_t k_ = 1;
  std::size_t start_ = 0;
  std::vector<std::vector<double>> matrix_;
  std::vector<std::vector<double>> cumulative_;

 public:
  /// Row-wise cumulative sums of matrix(), last entry forced to 1.
  const std::vector<std::vector<double>>& cumulative() const noexcept { return cumulative_; }
};

struct SchedulerState {
  std::size_t current = 0;  // chain position / round-robin cursor
  std::uint64_t steps = 0;
  bool started = false;
};

/// Y_n, sorted ascending and never empty; advances `state`.
std::vector<std::size_t> next_update_set(const AsyncScheduler& sched, SchedulerState& state,
                                         SeededRng& rng);

/// nu(n, i) = #{k < n : i in Y_k}.
struct UpdateCounters {
  std::vector<std::uint64_t> nu;
  std::uint64_t n = 0;

  UpdateCounters() = default;
  explicit UpdateCounters(std::size_t dim) : nu(dim, 0) {}
  void record(const std::vector<std::size_t>& y);
  bool operator==(const UpdateCounters&) const = default;
};

struct AsynchronyReport {
  double min_ratio = 0.0;
  /// ratios[k][i] = nu(n_k, i) / n_k at checkpoint k.
  std::vector<std::vector<double>> ratios;
  std::vector<double> terminal_ratio;
  /// drift[k][i] = n_k^gamma |nu(n_k, i)/n_k - terminal_ratio_i|
  std::vector<std::vector<double>> drift;
  double max_drift = 0.0;
};

/// Diagnostic over a sequence of counter snapshots (last = terminal).
/// Throws DomainError for an empty sequence or a snapshot with n = 0.
AsynchronyReport asynchrony_diagnostics(const std::vector<UpdateCounters>& checkpoints,
                                        double gamma = 0.49);

}  // namespace smdp
