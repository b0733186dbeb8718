#include "smdp/rvi.hpp"

#include <cmath>
#include <string>

#include "smdp/error.hpp"

namespace smdp {

std::vector<double> rvi_step(const SmdpModel& model, const RateFunction& f,
                             std::span<const double> q, double step) {
  if (q.size() != model.num_pairs()) throw DomainError("rvi_step: Q-table size mismatch");
  const auto& e = model.expectations();
  const auto v = state_values(model, q);
  const double fq = f.eval(q);
  std::vector<double> out(q.size());
  for (std::size_t i = 0; i < q.size(); ++i) {
    double next = 0.0;
    for (std::size_t s = 0; s < v.size(); ++s) next += e.p[i][s] * v[s];
    out[i] = q[i] + step * ((e.r[i] + next - q[i]) / e.t[i] - fq);
  }
  return out;
}

AoeSolution classical_rvi(const SmdpModel& model, const RateFunction& f, const QTable& q0,
                          const RviOptions& opts) {
  const double abar = opts.alpha_bar == 0.0 ? 0.9 * model.t_min() : opts.alpha_bar;
  if (!(abar > 0.0) || !(abar < model.t_min()))
    throw ParameterError("classical RVI needs alpha_bar in (0, t_min = " +
                         std::to_string(model.t_min()) + "), got " + std::to_string(abar));
  if (q0.size() != model.num_pairs()) throw DomainError("classical_rvi: Q0 size mismatch");
  if (f.dim() != model.num_pairs()) throw DomainError("classical_rvi: f dimension mismatch");

  AoeSolution sol;
  std::vector<double> q = q0.vec();
  for (std::size_t n = 0;; ++n) {
    // One pass gives both the residual at Q_n and Q_{n+1}.
    auto next = rvi_step(model, f, q, abar);
    // ||Q' - Q|| is ||h(Q)|| at the iteration's alpha_bar; rescale to t_min.
    const double res = sup_distance(next, q);
    const double aoe = res * model.t_min() / abar;
    if (!std::isfinite(res)) throw NumericalError("classical RVI produced a non-finite iterate");
    if (opts.keep_history) sol.residual_history.push_back(aoe);
    if (aoe <= opts.tol) {
      sol.iterations = n;
      sol.residual = res;
      break;
    }
    if (n >= opts.max_iters)
      throw IterationLimitError("classical RVI did not reach tol " + std::to_string(opts.tol) +
                                    " within " + std::to_string(opts.max_iters) + " iterations",
                                aoe);
    q = std::move(next);
  }
  sol.rstar = f.eval(q);
  sol.q = QTable(model.num_actions(), std::move(q));
  return sol;
}

}  // namespace smdp
