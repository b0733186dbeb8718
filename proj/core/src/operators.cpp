#include "smdp/operators.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "smdp/error.hpp"

namespace smdp {

namespace {

void check_size(const SmdpModel& model, std::span<const double> q) {
  if (q.size() != model.num_pairs())
    throw DomainError("Q-table has " + std::to_string(q.size()) + " entries, model has " +
                      std::to_string(model.num_pairs()) + " pairs");
}

// sum_s' p(s'|i) max_a q(s', a) for every pair i.
std::vector<double> expected_next_value(const SmdpModel& model, std::span<const double> q) {
  const auto v = state_values(model, q);
  const auto& p = model.expectations().p;
  std::vector<double> out(model.num_pairs(), 0.0);
  for (std::size_t i = 0; i < out.size(); ++i) {
    double acc = 0.0;
    for (std::size_t s = 0; s < v.size(); ++s) acc += p[i][s] * v[s];
    out[i] = acc;
  }
  return out;
}

std::vector<double> apply_T(const SmdpModel& model, std::span<const double> q, double abar,
                            bool with_reward) {
  check_alpha_bar(model, abar);
  check_size(model, q);
  const auto& e = model.expectations();
  const auto next = expected_next_value(model, q);
  std::vector<double> out(q.size());
  for (std::size_t i = 0; i < q.size(); ++i) {
    const double w = abar / e.t[i];
    out[i] = (with_reward ? w * e.r[i] : 0.0) + w * next[i] + (1.0 - w) * q[i];
  }
  return out;
}

}  // namespace

void check_alpha_bar(const SmdpModel& model, double alpha_bar) {
  if (!(alpha_bar > 0.0) || alpha_bar > model.t_min())
    throw ParameterError("alpha_bar must lie in (0, t_min = " + std::to_string(model.t_min()) +
                         "], got " + std::to_string(alpha_bar));
}

std::vector<double> operator_T(const SmdpModel& model, std::span<const double> q,
                               double alpha_bar) {
  return apply_T(model, q, alpha_bar, true);
}

std::vector<double> operator_T_zero(const SmdpModel& model, std::span<const double> q,
                                    double alpha_bar) {
  return apply_T(model, q, alpha_bar, false);
}

std::vector<double> h_eval(const SmdpModel& model, const RateFunction& f,
                           std::span<const double> q, double alpha_bar) {
  check_alpha_bar(model, alpha_bar);
  check_size(model, q);
  const auto& e = model.expectations();
  const auto next = expected_next_value(model, q);
  const double fq = f.eval(q);
  std::vector<double> out(q.size());
  for (std::size_t i = 0; i < q.size(); ++i)
    out[i] = alpha_bar * ((e.r[i] + next[i] - q[i]) / e.t[i] - fq);
  return out;
}

std::vector<double> h_prime_eval(const SmdpModel& model, std::span<const double> q,
                                 double rstar, double alpha_bar) {
  auto out = operator_T(model, q, alpha_bar);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] -= q[i] + alpha_bar * rstar;
  return out;
}

std::vector<double> h_infinity_eval(const SmdpModel& model, const RateFunction& f,
                                    std::span<const double> q, double alpha_bar) {
  auto out = operator_T_zero(model, q, alpha_bar);
  const double finf = f.eval_scaling_limit(q);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] -= q[i] + alpha_bar * finf;
  return out;
}

double aoe_residual(const SmdpModel& model, const RateFunction& f, std::span<const double> q) {
  return sup_norm(h_eval(model, f, q, model.t_min()));
}

double sup_norm(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double sup_distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw DomainError("sup_distance: size mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace smdp
