#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "smdp/error.hpp"
#include "smdp/learner.hpp"

namespace smdp {

struct Checkpoint {
  std::uint64_t n = 0;
  double f_q = 0.0;
  double residual_inf = 0.0;
  double t_err_max = 0.0;
  std::optional<std::vector<double>> q;
};

struct RunTrace {
  std::vector<Checkpoint> checkpoints;
  std::uint64_t master_seed = 0;
  std::string config_hash;
  bool override_used = false;
  std::vector<std::string> validation_violations;
  std::optional<std::string> aborted;
  std::size_t dim = 0;
};

struct RunConfig {
  LearnerConfig learner;
  ParamThresholds thresholds;
  UpdateMode mode = UpdateMode::Asynchronous;
  bool override_validation = false;
  std::uint64_t iters = 500'000;
  std::uint64_t checkpoint_every = 1'000;
  /// Q snapshots on checkpoints with n divisible by this; 0 disables.
  std::uint64_t snapshot_every = 10'000;
  std::uint64_t seed = 0;
  std::optional<QTable> q0;
  std::optional<QTable> t0;
  std::string config_hash;
};

/// Raised by run() when the thresholds fail and no override is set.
class ValidationFailure : public Error {
 public:
  ValidationFailure(const std::string& what, ValidationReport report)
      : Error(what), report_(std::move(report)) {}
  const ValidationReport& report() const noexcept { return report_; }

 private:
  ValidationReport report_;
};

/// Divergence during run(), carrying the trace recorded so far.
class RunDiverged : public DivergenceError {
 public:
  RunDiverged(const std::string& what, RunTrace partial)
      : DivergenceError(what), partial_(std::move(partial)) {}
  const RunTrace& partial() const noexcept { return partial_; }

 private:
  RunTrace partial_;
};

/// Executes cfg.iters learner steps with checkpoints. Deterministic in cfg.seed.
RunTrace run(const SmdpModel& model, const RateFunction& f, const RunConfig& cfg);

/// Same, also returning the terminal learner state.
RunTrace run(const SmdpModel& model, const RateFunction& f, const RunConfig& cfg,
             LearnerState& final_state);

/// CSV: n,f_q,residual_inf,t_err_max[,q_0..q_{d-1}]; q columns are empty on
/// rows without a snapshot. Doubles in shortest round-trip form.
void write_trace_csv(std::ostream& os, const RunTrace& trace);
std::string trace_csv(const RunTrace& trace);
RunTrace read_trace_csv(const std::string& text);

enum class ConvergenceVerdict { ConvergedToPoint, ConvergedToSet, NotConverged };

struct ConvergenceReport {
  ConvergenceVerdict verdict = ConvergenceVerdict::NotConverged;
  double max_residual = 0.0;
  double max_pairwise = 0.0;
  std::size_t window_checkpoints = 0;
  std::size_t window_snapshots = 0;
};

/// Window = checkpoints with n >= (1 - window_fraction) * n_last. Throws
/// InputError with fewer than 10 snapshots in the window.
ConvergenceReport convergence_detector(const RunTrace& trace, double window_fraction,
                                       double tol_point, double tol_set);

const char* to_string(ConvergenceVerdict v);

}  // namespace smdp
