#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "smdp/error.hpp"
#include "smdp/learner.hpp"
#include "smdp/model.hpp"
#include "smdp/rate_function.hpp"
#include "smdp/schedules.hpp"
#include "smdp/trace.hpp"

namespace smdp::harness {

/// Every problem found while parsing, one message per field.
class ConfigError : public InputError {
 public:
  explicit ConfigError(std::vector<std::string> errors);
  const std::vector<std::string>& errors() const noexcept { return errors_; }

 private:
  std::vector<std::string> errors_;
};

struct RviSettings {
  double alpha_bar = 0.0;  // 0 selects 0.9 t_min
  std::size_t max_iters = 1'000'000;
  double tol = 1e-10;
};

struct OdeSettings {
  double t_end = 20.0;
  double dt = 1e-3;
  std::size_t starts = 20;
  double t_end_infinity = 40.0;
  std::size_t starts_infinity = 50;
};

struct SweepSettings {
  std::vector<double> A;
  std::vector<double> sigma;
  std::vector<AsyncScheduler> schedulers;
};

struct ExperimentConfig {
  /// Zoo name when the model came from the zoo, empty otherwise.
  std::string model_name;
  SmdpModel model = SmdpModel(
      1, 1, {TransitionLaw{{Branch{1.0, 0, holding::Deterministic{1.0}, reward::Deterministic{0.0}}}}});
  RateFunction f = RateFunction::mean(1);
  StepSchedule alpha = StepSchedule::class2(4.0);
  StepSchedule beta = StepSchedule::scaled(StepSchedule::class2(4.0), 4.0);
  /// True when beta is sigma * alpha (rebuilt when a sweep changes A or sigma).
  bool beta_scaled_alpha = true;
  std::optional<double> eta_constant;
  AsyncScheduler scheduler = AsyncScheduler::synchronous(1);
  bool gauss_seidel = false;
  double sigma = 0.0;
  double gamma = 0.49;
  double t_min_lower_bound = 0.0;
  double lipschitz_bound = 0.0;
  bool override_validation = false;
  std::uint64_t iters = 500'000;
  std::uint64_t checkpoint_every = 1'000;
  std::uint64_t snapshot_every = 10'000;
  std::vector<std::uint64_t> seeds{7};
  std::optional<std::vector<double>> q0;
  std::optional<std::vector<double>> t0;
  std::string output_dir;
  RviSettings rvi;
  OdeSettings ode;
  SweepSettings sweep;
};

/// `model` may be a zoo name, a path (resolved against base_dir) or an inline
/// model object. Throws ConfigError listing every invalid field.
ExperimentConfig parse_experiment_config(const std::string& text,
                                         const std::filesystem::path& base_dir = {});
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

/// Canonical JSON (sorted keys, model inlined). Parsing the result gives a
/// config with the same hash.
std::string serialize_experiment_config(const ExperimentConfig& cfg, int indent = 2);

/// FNV-1a 64 of the canonical form without output_dir, as 16 hex digits.
std::string config_hash(const ExperimentConfig& cfg);

ParamThresholds thresholds_of(const ExperimentConfig& cfg);
UpdateMode mode_of(const ExperimentConfig& cfg);
RunConfig to_run_config(const ExperimentConfig& cfg, std::uint64_t seed);

}  // namespace smdp::harness
