#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "smdp/operators.hpp"

namespace smdp {

struct AoeSolution {
  QTable q;
  double rstar = 0.0;
  /// ||h'(q)||_inf with r* = f(q), at the iteration's alpha_bar.
  double residual = 0.0;
  std::size_t iterations = 0;
  /// ||h(Q_n)||_inf at alpha_bar = t_min per iteration, starting with Q_0.
  std::vector<double> residual_history;
};

/// One synchronous relative value iteration sweep with the given stepsize:
///   Q' = Q + step ((r + sum p max Q - Q) / t - f(Q))
std::vector<double> rvi_step(const SmdpModel& model, const RateFunction& f,
                             std::span<const double> q, double step);

struct RviOptions {
  /// 0 selects the default 0.9 * t_min.
  double alpha_bar = 0.0;
  std::size_t max_iters = 1'000'000;
  double tol = 1e-10;
  bool keep_history = true;
};

/// Iterates rvi_step with constant stepsize alpha_bar in (0, t_min) until
/// ||h(Q)||_inf <= tol, h taken at alpha_bar = t_min. Throws ParameterError for alpha_bar outside the open
/// interval and IterationLimitError when max_iters is exhausted.
AoeSolution classical_rvi(const SmdpModel& model, const RateFunction& f,
                          const QTable& q0, const RviOptions& opts = {});

}  // namespace smdp
