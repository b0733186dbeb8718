#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "smdp/model.hpp"
#include "smdp/rate_function.hpp"

namespace smdp {

/// Q-factors over pairs, flattened as i = s * |A| + a.
class QTable {
 public:
  QTable() = default;
  QTable(std::size_t num_states, std::size_t num_actions, double fill = 0.0)
      : num_actions_(num_actions), values_(num_states * num_actions, fill) {}
  QTable(std::size_t num_actions, std::vector<double> values)
      : num_actions_(num_actions), values_(std::move(values)) {}

  double& operator()(StateId s, ActionId a) { return values_[s * num_actions_ + a]; }
  double operator()(StateId s, ActionId a) const { return values_[s * num_actions_ + a]; }
  double& operator[](std::size_t i) { return values_[i]; }
  double operator[](std::size_t i) const { return values_[i]; }

  std::size_t size() const noexcept { return values_.size(); }
  std::size_t num_actions() const noexcept { return num_actions_; }
  std::size_t num_states() const noexcept {
    return num_actions_ == 0 ? 0 : values_.size() / num_actions_;
  }
  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }
  const std::vector<double>& vec() const noexcept { return values_; }

  bool operator==(const QTable&) const = default;

 private:
  std::size_t num_actions_ = 0;
  std::vector<double> values_;
};

/// Throws ParameterError unless 0 < alpha_bar <= t_min.
void check_alpha_bar(const SmdpModel& model, double alpha_bar);

/// T(q)(s,a) = abar r/t + (abar/t) sum p max q + (1 - abar/t) q(s,a)
std::vector<double> operator_T(const SmdpModel& model, std::span<const double> q,
                               double alpha_bar);
/// Same with all expected rewards set to zero.
std::vector<double> operator_T_zero(const SmdpModel& model, std::span<const double> q,
                                    double alpha_bar);

/// h(q) = abar ((r + sum p max q - q) / t - f(q))
std::vector<double> h_eval(const SmdpModel& model, const RateFunction& f,
                           std::span<const double> q, double alpha_bar);
/// h'(q) = T(q) - q - abar r*; invariant under scalar translation of q.
std::vector<double> h_prime_eval(const SmdpModel& model, std::span<const double> q,
                                 double rstar, double alpha_bar);
/// h_inf(q) = T0(q) - q - abar f_inf(q)
std::vector<double> h_infinity_eval(const SmdpModel& model, const RateFunction& f,
                                    std::span<const double> q, double alpha_bar);

/// ||h(q)||_inf at alpha_bar = t_min: the AOE residual used by diagnostics.
double aoe_residual(const SmdpModel& model, const RateFunction& f,
                    std::span<const double> q);

double sup_norm(std::span<const double> v);
double sup_distance(std::span<const double> a, std::span<const double> b);

}  // namespace smdp
