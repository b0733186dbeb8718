#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace smdp {

enum class ScheduleKind { Class1, Class2, ScaledCopy, PowerLaw };

/// Deterministic stepsize sequence indexed by n >= 0.
///   class1(A):        1 / (A n),        1/A at n = 0
///   class2(A):        1 / (A n ln n),   1/A when n ln n = 0
///   scaled(base, s):  s * base(n)
///   power_law(B, b):  1 / (B n^b),      1/B at n = 0
class StepSchedule {
 public:
  static StepSchedule class1(double A);
  static StepSchedule class2(double A);
  static StepSchedule scaled(const StepSchedule& base, double factor);
  static StepSchedule power_law(double B, double b);

  ScheduleKind kind() const noexcept { return kind_; }
  double scale() const noexcept { return param_; }    // A, factor, or B
  double exponent() const noexcept { return exponent_; }  // b for power_law
  const StepSchedule& base() const;

  /// Raw sequence value.
  double value(std::uint64_t n) const;

  bool operator==(const StepSchedule& o) const;
  std::string describe() const;

 private:
  StepSchedule(ScheduleKind k, double p, double e, std::shared_ptr<const StepSchedule> b)
      : kind_(k), param_(p), exponent_(e), base_(std::move(b)) {}
  ScheduleKind kind_;
  double param_;
  double exponent_;
  std::shared_ptr<const StepSchedule> base_;
};

inline double alpha(const StepSchedule& s, std::uint64_t n) { return s.value(n); }
/// Holding-time stepsize, clipped to [0, 1].
double beta(const StepSchedule& s, std::uint64_t n);
/// Floor on holding-time estimates: 1 / ln(n + e).
double eta(std::uint64_t n);

/// limsup ln(a_n) / sum_{k<=n} a_k, analytically; -inf encoded as
/// -std::numeric_limits<double>::infinity().
double decay_exponent(const StepSchedule& s);

struct ParamThresholds {
  double t_min_lower_bound = 1.0;
  double lipschitz_bound = 1.0;
  double sigma = 0.0;   // varsigma
  double gamma = 0.49;  // asynchrony drift exponent for class-1 stepsizes

  /// 2 / t_min_lower_bound + L_f
  double a_star() const;
};

/// Throws ParameterError unless t_min_lower_bound > 0, L_f >= 0 and the
/// resulting threshold is finite.
ParamThresholds make_thresholds(double t_min_lower_bound, double lipschitz_bound,
                                double sigma, double gamma = 0.49);

enum class UpdateMode { Asynchronous, Synchronous };

struct ValidationReport {
  bool pass = true;
  double a_star = 0.0;
  std::vector<std::string> violations;
  std::vector<std::string> notes;
};

/// Checks the single-point convergence thresholds on (alpha, beta).
ValidationReport validate_params(const ParamThresholds& th, const StepSchedule& alpha_s,
                                 const StepSchedule& beta_s, UpdateMode mode);

}  // namespace smdp
