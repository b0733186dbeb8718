#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "smdp/model.hpp"
#include "smdp/operators.hpp"
#include "smdp/rate_function.hpp"
#include "smdp/schedules.hpp"
#include "smdp/scheduler.hpp"

namespace smdp {

struct LearnerConfig {
  StepSchedule alpha = StepSchedule::class2(4.0);
  StepSchedule beta = StepSchedule::scaled(StepSchedule::class2(4.0), 4.0);
  AsyncScheduler scheduler = AsyncScheduler::synchronous(1);
  /// Read partially updated Q inside Y_n (Gauss-Seidel) instead of Q_n.
  bool gauss_seidel = false;
  /// Overrides the default floor sequence 1 / ln(n + e) with a constant.
  std::optional<double> eta_constant;
  double divergence_guard = 1e12;
};

struct LearnerState {
  QTable q;
  /// Holding-time estimates, same layout as q.
  QTable t;
  UpdateCounters counters;
  SchedulerState scheduler;
  std::uint64_t master_seed = 0;
  std::uint64_t scheduler_draws = 0;

  std::uint64_t n() const noexcept { return counters.n; }
};

/// Q_0 = 0 and T_0 = eta_0 unless given.
LearnerState make_learner_state(const SmdpModel& model, std::uint64_t seed,
                                std::optional<QTable> q0 = std::nullopt,
                                std::optional<QTable> t0 = std::nullopt);

struct StepRecord {
  std::vector<std::size_t> updated;          // Y_n
  std::vector<TransitionSample> samples;     // aligned with updated
  /// (R + max Q_n(S', .) - Q_n(i)) / (T_n(i) v eta_n) - f(Q_n), before the stepsize.
  std::vector<double> increments;
  std::vector<double> alphas;
  std::vector<double> betas;
  double f_value = 0.0;
  double eta = 0.0;
};

double learner_eta(const LearnerConfig& cfg, std::uint64_t n);

/// One iteration of asynchronous RVI Q-learning. Components outside Y_n are
/// left untouched; f is evaluated once on Q_n. Throws DivergenceError when an
/// entry becomes non-finite or exceeds the guard.
StepRecord learner_step(const SmdpModel& model, const RateFunction& f,
                        const LearnerConfig& cfg, LearnerState& state);

/// Transition stream of pair i at its k-th draw.
SeededRng pair_stream(std::uint64_t master_seed, std::size_t pair, std::uint64_t draw);

struct NoiseDecomposition {
  std::vector<double> martingale;  // M_{n+1}
  std::vector<double> bias;        // eps_{n+1}
  /// h(Q_n) at alpha_bar = t_min (full vector).
  std::vector<double> drift;
  double alpha_bar = 0.0;
};

/// Splits the step taken from `before` (the state prior to learner_step) into
/// h(Q_n) + M + eps; both noise vectors are zero off Y_n.
NoiseDecomposition compute_noise_decomposition(const SmdpModel& model, const RateFunction& f,
                                               const LearnerState& before,
                                               const StepRecord& step);

/// Argmax per state; ties go to the lowest action index.
DeterministicPolicy greedy_policy(const QTable& q);

}  // namespace smdp
