#include "smdp/learner.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "smdp/error.hpp"

namespace smdp {

namespace {
constexpr std::uint64_t kSchedulerTag = 0x5c4ed;
constexpr std::uint64_t kPairTag = 0x9a1b;

double max_action_value(std::span<const double> q, std::size_t na, StateId s) {
  const double* row = q.data() + s * na;
  return *std::max_element(row, row + na);
}
}  // namespace

LearnerState make_learner_state(const SmdpModel& model, std::uint64_t seed,
                                std::optional<QTable> q0, std::optional<QTable> t0) {
  const std::size_t ns = model.num_states();
  const std::size_t na = model.num_actions();
  LearnerState st;
  st.q = q0 ? std::move(*q0) : QTable(ns, na, 0.0);
  st.t = t0 ? std::move(*t0) : QTable(ns, na, eta(0));
  if (st.q.size() != model.num_pairs() || st.t.size() != model.num_pairs())
    throw DomainError("initial Q/T tables do not match the model");
  for (double v : st.t.values())
    if (!(v >= 0.0) || !std::isfinite(v))
      throw ParameterError("initial holding-time estimates must be finite and nonnegative");
  st.counters = UpdateCounters(model.num_pairs());
  st.master_seed = seed;
  return st;
}

double learner_eta(const LearnerConfig& cfg, std::uint64_t n) {
  return cfg.eta_constant ? *cfg.eta_constant : eta(n);
}

SeededRng pair_stream(std::uint64_t master_seed, std::size_t pair, std::uint64_t draw) {
  return SeededRng::derive(master_seed, {kPairTag, pair, draw});
}

StepRecord learner_step(const SmdpModel& model, const RateFunction& f, const LearnerConfig& cfg,
                        LearnerState& state) {
  const std::size_t d = model.num_pairs();
  const std::size_t na = model.num_actions();
  if (cfg.scheduler.dim() != d) throw DomainError("scheduler dimension does not match the model");
  if (state.q.size() != d) throw DomainError("learner state does not match the model");

  StepRecord rec;
  rec.eta = learner_eta(cfg, state.n());

  SeededRng sched_rng = SeededRng::derive(state.master_seed, {kSchedulerTag});
  sched_rng.set_counter(state.scheduler_draws);
  rec.updated = next_update_set(cfg.scheduler, state.scheduler, sched_rng);
  state.scheduler_draws = sched_rng.counter();

  rec.f_value = f.eval(state.q.values());
  // Jacobi reads go through a copy of Q_n; Gauss-Seidel reads the live table.
  std::vector<double> q_n;
  if (!cfg.gauss_seidel && rec.updated.size() > 1) q_n = state.q.vec();
  std::span<const double> read =
      q_n.empty() ? std::span<const double>(state.q.values()) : std::span<const double>(q_n);

  const std::size_t m = rec.updated.size();
  rec.samples.reserve(m);
  rec.increments.reserve(m);
  rec.alphas.reserve(m);
  rec.betas.reserve(m);
  for (std::size_t i : rec.updated) {
    const std::uint64_t nu = state.counters.nu[i];
    SeededRng rng = pair_stream(state.master_seed, i, nu);
    const TransitionSample smp = sample_transition(model, model.state_of(i), model.action_of(i), rng);
    const double denom = std::max(state.t[i], rec.eta);
    const double inc =
        (smp.reward + max_action_value(read, na, smp.next) - read[i]) / denom - rec.f_value;
    const double a = alpha(cfg.alpha, nu);
    const double b = beta(cfg.beta, nu);
    state.q[i] += a * inc;
    state.t[i] += b * (smp.tau - state.t[i]);
    rec.samples.push_back(smp);
    rec.increments.push_back(inc);
    rec.alphas.push_back(a);
    rec.betas.push_back(b);
  }
  state.counters.record(rec.updated);

  for (std::size_t i : rec.updated) {
    const double v = state.q[i];
    if (!std::isfinite(v) || std::abs(v) > cfg.divergence_guard)
      throw DivergenceError("Q(" + std::to_string(i) + ") = " + std::to_string(v) +
                            " left the stability guard at n = " + std::to_string(state.n()));
  }
  return rec;
}

NoiseDecomposition compute_noise_decomposition(const SmdpModel& model, const RateFunction& f,
                                               const LearnerState& before,
                                               const StepRecord& step) {
  const std::size_t d = model.num_pairs();
  const std::size_t na = model.num_actions();
  const auto& e = model.expectations();
  NoiseDecomposition out;
  out.alpha_bar = model.t_min();
  out.drift = h_eval(model, f, before.q.values(), out.alpha_bar);
  out.martingale.assign(d, 0.0);
  out.bias.assign(d, 0.0);

  const auto q = before.q.values();
  const auto v = state_values(model, q);
  for (std::size_t k = 0; k < step.updated.size(); ++k) {
    const std::size_t i = step.updated[k];
    const TransitionSample& smp = step.samples[k];
    const double denom = std::max(before.t[i], step.eta);
    double expected_next = 0.0;
    for (std::size_t s = 0; s < v.size(); ++s) expected_next += e.p[i][s] * v[s];
    const double next = max_action_value(q, na, smp.next);
    out.martingale[i] =
        out.alpha_bar * ((smp.reward - e.r[i]) / denom + (next - expected_next) / e.t[i]);
    const double core = e.r[i] + next - q[i];
    out.bias[i] = out.alpha_bar * (core / denom - core / e.t[i]);
  }
  return out;
}

DeterministicPolicy greedy_policy(const QTable& q) {
  const std::size_t na = q.num_actions();
  DeterministicPolicy pi;
  pi.actions.resize(q.num_states());
  for (std::size_t s = 0; s < pi.actions.size(); ++s) {
    ActionId best = 0;
    for (ActionId a = 1; a < na; ++a)
      if (q(s, a) > q(s, best)) best = a;
    pi.actions[s] = best;
  }
  return pi;
}

}  // namespace smdp
