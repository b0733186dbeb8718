#include "smdp/ode.hpp"

#include <cmath>
#include <string>

#include "smdp/error.hpp"
#include "smdp/operators.hpp"

namespace smdp {

VectorField make_field(const SmdpModel& model, const RateFunction& f, const FieldParams& params) {
  const double abar = params.alpha_bar == 0.0 ? model.t_min() : params.alpha_bar;
  check_alpha_bar(model, abar);
  if (params.kind != FieldKind::HPrime && f.dim() != model.num_pairs())
    throw DomainError("make_field: f dimension does not match the model");
  const SmdpModel* m = &model;
  switch (params.kind) {
    case FieldKind::H:
      return [m, f, abar](std::span<const double> x, std::span<double> out) {
        const auto v = h_eval(*m, f, x, abar);
        std::copy(v.begin(), v.end(), out.begin());
      };
    case FieldKind::HPrime:
      return [m, abar, rstar = params.rstar](std::span<const double> x, std::span<double> out) {
        const auto v = h_prime_eval(*m, x, rstar, abar);
        std::copy(v.begin(), v.end(), out.begin());
      };
    case FieldKind::HInfinity:
      return [m, f, abar](std::span<const double> x, std::span<double> out) {
        const auto v = h_infinity_eval(*m, f, x, abar);
        std::copy(v.begin(), v.end(), out.begin());
      };
  }
  throw DomainError("make_field: unknown field kind");
}

Trajectory integrate_ode(const VectorField& field, std::vector<double> x0, double t_end, double dt,
                         std::size_t sample_every) {
  if (!(dt > 0.0) || !(t_end >= 0.0) || sample_every == 0)
    throw ParameterError("integrate_ode needs dt > 0, t_end >= 0 and sample_every >= 1");
  const std::size_t d = x0.size();
  const auto steps = static_cast<std::size_t>(std::ceil(t_end / dt - 1e-9));
  Trajectory traj;
  traj.times.push_back(0.0);
  traj.states.push_back(x0);

  std::vector<double> x = std::move(x0), k1(d), k2(d), k3(d), k4(d), tmp(d);
  for (std::size_t n = 1; n <= steps; ++n) {
    const double h = std::min(dt, t_end - (n - 1) * dt);
    field(x, k1);
    for (std::size_t i = 0; i < d; ++i) tmp[i] = x[i] + 0.5 * h * k1[i];
    field(tmp, k2);
    for (std::size_t i = 0; i < d; ++i) tmp[i] = x[i] + 0.5 * h * k2[i];
    field(tmp, k3);
    for (std::size_t i = 0; i < d; ++i) tmp[i] = x[i] + h * k3[i];
    field(tmp, k4);
    for (std::size_t i = 0; i < d; ++i) {
      x[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
      if (!std::isfinite(x[i]))
        throw DivergenceError("ODE state became non-finite at t = " + std::to_string(n * dt));
    }
    if (n % sample_every == 0 || n == steps) {
      traj.times.push_back(n == steps ? t_end : n * dt);
      traj.states.push_back(x);
    }
  }
  return traj;
}

}  // namespace smdp
