#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "smdp/communication.hpp"
#include "smdp/gain_oracle.hpp"
#include "smdp/harness/config.hpp"
#include "smdp/rvi.hpp"
#include "smdp/trace.hpp"

namespace smdp::harness {

/// Runs task(0..count-1) on up to `jobs` threads (0 = hardware concurrency).
/// The first exception thrown by any task is rethrown after all threads join.
void parallel_for(std::size_t count, std::size_t jobs, const std::function<void(std::size_t)>& task);

struct ModelCheckReport {
  AssumptionReport assumptions;
  CommunicationClass communication;
  double t_min = 0.0;
  bool ok() const { return assumptions.holds && is_weakly_communicating(communication); }
};

ModelCheckReport model_check(const SmdpModel& model);
std::string format_model_check(const SmdpModel& model, const ModelCheckReport& rep, bool json);

std::string format_oracle(const SmdpModel& model, const GainOracleResult& res, bool json);

struct SeedResult {
  std::uint64_t seed = 0;
  RunTrace trace;
  std::vector<double> final_q;
  std::vector<double> final_t;
  DeterministicPolicy greedy;
  double greedy_gain = 0.0;
  std::optional<ConvergenceReport> convergence;
  std::optional<std::string> error;
};

struct LearnReport {
  std::string config_hash;
  ValidationReport validation;
  std::vector<SeedResult> seeds;
};

struct RunOptions {
  std::size_t jobs = 0;
  /// Trace CSVs and summary.json are written here when set.
  std::optional<std::filesystem::path> out_dir;
};

/// One run per seed. Throws ValidationFailure before any run when the
/// thresholds fail without override.
LearnReport learn(const ExperimentConfig& cfg, const RunOptions& opts = {});
std::string format_learn(const LearnReport& rep, bool json);

struct SweepCell {
  double A = 0.0;
  double sigma = 0.0;
  std::string scheduler;
  std::uint64_t seed = 0;
  bool validation_pass = false;
  bool ran = false;
  double final_f = 0.0;
  double final_residual = 0.0;
  std::optional<std::string> error;
};

/// Grid over sweep.A x sweep.sigma x sweep.schedulers x seeds. Cells that
/// fail validation are reported and skipped unless the override is set.
std::vector<SweepCell> sweep(const ExperimentConfig& cfg, const RunOptions& opts = {});
std::string format_sweep(const std::vector<SweepCell>& cells, bool json);

struct RviReport {
  AoeSolution solution;
  double aoe_residual = 0.0;
  double f_value = 0.0;
};

RviReport solve_rvi(const ExperimentConfig& cfg, const std::optional<std::filesystem::path>& out_dir);
std::string format_rvi(const RviReport& rep, bool json);

struct OdeCheckReport {
  /// Largest increase of ||y(t) - q_bar|| between samples along h' flows.
  double max_distance_increase = 0.0;
  /// max_t ||x(t) - y(t) - z(t) 1|| on [0, t_end].
  double max_decomposition_error = 0.0;
  /// max over starts of ||x(t_end_infinity)|| along h_inf flows.
  double max_terminal_norm = 0.0;
  bool distance_ok = false;
  bool decomposition_ok = false;
  bool stability_ok = false;
  bool ok() const { return distance_ok && decomposition_ok && stability_ok; }
};

/// Tolerances: nonincrease within 1e-9, decomposition 1e-6, terminal norm 1e-4.
OdeCheckReport ode_check(const SmdpModel& model, const RateFunction& f, const OdeSettings& s,
                         std::uint64_t seed);
std::string format_ode_check(const OdeCheckReport& rep, bool json);

}  // namespace smdp::harness
