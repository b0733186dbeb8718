#include "smdp/schedules.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "smdp/error.hpp"

namespace smdp {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

std::string num(double x) {
  std::ostringstream os;
  os << x;
  return os.str();
}
}  // namespace

StepSchedule StepSchedule::class1(double A) {
  if (!(A > 0.0) || !std::isfinite(A)) throw ParameterError("class-1 schedule needs A > 0");
  return StepSchedule(ScheduleKind::Class1, A, 1.0, nullptr);
}

StepSchedule StepSchedule::class2(double A) {
  if (!(A > 0.0) || !std::isfinite(A)) throw ParameterError("class-2 schedule needs A > 0");
  return StepSchedule(ScheduleKind::Class2, A, 1.0, nullptr);
}

StepSchedule StepSchedule::scaled(const StepSchedule& base, double factor) {
  if (!(factor > 0.0) || !std::isfinite(factor))
    throw ParameterError("scaled schedule needs a factor > 0");
  return StepSchedule(ScheduleKind::ScaledCopy, factor, 1.0,
                      std::make_shared<const StepSchedule>(base));
}

StepSchedule StepSchedule::power_law(double B, double b) {
  if (!(B > 0.0) || !(b > 0.0) || !std::isfinite(B) || !std::isfinite(b))
    throw ParameterError("power-law schedule needs B > 0 and b > 0");
  return StepSchedule(ScheduleKind::PowerLaw, B, b, nullptr);
}

const StepSchedule& StepSchedule::base() const {
  if (!base_) throw DomainError("schedule " + describe() + " has no base");
  return *base_;
}

double StepSchedule::value(std::uint64_t n) const {
  const double x = static_cast<double>(n);
  switch (kind_) {
    case ScheduleKind::Class1:
      return n == 0 ? 1.0 / param_ : 1.0 / (param_ * x);
    case ScheduleKind::Class2:
      return n <= 1 ? 1.0 / param_ : 1.0 / (param_ * x * std::log(x));
    case ScheduleKind::ScaledCopy:
      return param_ * base_->value(n);
    case ScheduleKind::PowerLaw:
      return n == 0 ? 1.0 / param_ : 1.0 / (param_ * std::pow(x, exponent_));
  }
  return 0.0;
}

bool StepSchedule::operator==(const StepSchedule& o) const {
  if (kind_ != o.kind_ || param_ != o.param_ || exponent_ != o.exponent_) return false;
  if (!base_ || !o.base_) return !base_ && !o.base_;
  return *base_ == *o.base_;
}

std::string StepSchedule::describe() const {
  switch (kind_) {
    case ScheduleKind::Class1:
      return "class1(A=" + num(param_) + ")";
    case ScheduleKind::Class2:
      return "class2(A=" + num(param_) + ")";
    case ScheduleKind::ScaledCopy:
      return num(param_) + "*" + base_->describe();
    case ScheduleKind::PowerLaw:
      return "power_law(B=" + num(param_) + ", b=" + num(exponent_) + ")";
  }
  return "?";
}

double beta(const StepSchedule& s, std::uint64_t n) { return std::clamp(s.value(n), 0.0, 1.0); }

double eta(std::uint64_t n) { return 1.0 / std::log(static_cast<double>(n) + std::exp(1.0)); }

double decay_exponent(const StepSchedule& s) {
  switch (s.kind()) {
    case ScheduleKind::Class1:
      return -s.scale();
    case ScheduleKind::Class2:
      return kNegInf;
    case ScheduleKind::ScaledCopy: {
      // ln(c a_n) / (c sum a_k) -> l(a) / c; clipping only affects finitely many terms.
      const double l = decay_exponent(s.base());
      return std::isinf(l) ? l : l / s.scale();
    }
    case ScheduleKind::PowerLaw: {
      const double b = s.exponent();
      if (b < 1.0) return 0.0;
      if (b == 1.0) return -s.scale();
      return kNegInf;
    }
  }
  throw DomainError("decay_exponent: unsupported schedule kind");
}

double ParamThresholds::a_star() const { return 2.0 / t_min_lower_bound + lipschitz_bound; }

ParamThresholds make_thresholds(double t_min_lower_bound, double lipschitz_bound, double sigma,
                                double gamma) {
  if (!(t_min_lower_bound > 0.0)) throw ParameterError("t_min lower bound must be positive");
  if (!(lipschitz_bound >= 0.0)) throw ParameterError("Lipschitz bound must be nonnegative");
  if (!(gamma > 0.0 && gamma < 0.5)) throw ParameterError("gamma must lie in (0, 1/2)");
  ParamThresholds th{t_min_lower_bound, lipschitz_bound, sigma, gamma};
  if (!std::isfinite(th.a_star())) throw ParameterError("threshold A_* is not finite");
  return th;
}

ValidationReport validate_params(const ParamThresholds& th, const StepSchedule& alpha_s,
                                 const StepSchedule& beta_s, UpdateMode mode) {
  ValidationReport rep;
  rep.a_star = th.a_star();
  const double as = rep.a_star;
  const bool sync = mode == UpdateMode::Synchronous;
  auto violate = [&](std::string msg) {
    rep.pass = false;
    rep.violations.push_back(std::move(msg));
  };

  switch (alpha_s.kind()) {
    case ScheduleKind::Class1: {
      const double A = alpha_s.scale();
      if (!(A / 2.0 > as))
        violate("class-1 alpha: A/2 = " + num(A / 2.0) + " must exceed A_* = " + num(as));
      if (sync)
        rep.notes.push_back("synchronous updates: asynchrony condition gamma*A > A_* not needed");
      else if (!(th.gamma * A > as))
        violate("class-1 alpha: gamma*A = " + num(th.gamma * A) + " must exceed A_* = " + num(as));
      break;
    }
    case ScheduleKind::Class2: {
      const double A = alpha_s.scale();
      if (sync)
        rep.notes.push_back("synchronous updates: class-2 A may be chosen freely");
      else if (!(A > as))
        violate("class-2 alpha: A = " + num(A) + " must exceed A_* = " + num(as));
      break;
    }
    default:
      violate("alpha must be a class-1 or class-2 schedule, got " + alpha_s.describe());
  }

  if (!(th.sigma > as)) violate("sigma = " + num(th.sigma) + " must exceed A_* = " + num(as));

  // "Eventually" is probed at a few large indices.
  for (std::uint64_t n : {1'000'000ULL, 100'000'000ULL, 10'000'000'000ULL}) {
    const double b = beta(beta_s, n);
    const double a = alpha_s.value(n);
    if (b < th.sigma * a * (1.0 - 1e-12)) {
      violate("beta_n >= sigma*alpha_n fails at n = " + std::to_string(n) + " (" + num(b) +
              " < " + num(th.sigma * a) + ")");
      break;
    }
  }

  const double l = decay_exponent(beta_s);
  const double lhs = l == 0.0 ? 0.0 : -th.sigma * l / 2.0;
  if (!(lhs > as))
    violate("beta decay: -sigma*l(beta)/2 = " + num(lhs) + " must exceed A_* = " + num(as));
  return rep;
}

}  // namespace smdp
