#pragma once

#include <functional>
#include <span>
#include <vector>

#include "smdp/model.hpp"
#include "smdp/rate_function.hpp"

namespace smdp {

/// out = field(x); out is pre-sized to x.size().
using VectorField = std::function<void(std::span<const double> x, std::span<double> out)>;

enum class FieldKind { H, HPrime, HInfinity };

struct FieldParams {
  FieldKind kind = FieldKind::H;
  double alpha_bar = 0.0;  // 0 selects t_min
  double rstar = 0.0;      // used by HPrime only
};

/// Binds one of h, h', h_inf to a model. The returned closure copies f and
/// keeps a reference to the model.
VectorField make_field(const SmdpModel& model, const RateFunction& f,
                       const FieldParams& params);

struct Trajectory {
  std::vector<double> times;
  std::vector<std::vector<double>> states;
};

/// Fixed-step classical RK4, sampled every `sample_every` steps (t = 0 included).
/// Throws DivergenceError on a non-finite state.
Trajectory integrate_ode(const VectorField& field, std::vector<double> x0, double t_end,
                         double dt = 1e-3, std::size_t sample_every = 1);

}  // namespace smdp
