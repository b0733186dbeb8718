#include "smdp/harness/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "smdp/gain_oracle.hpp"
#include "smdp/harness/config.hpp"
#include "smdp/harness/experiment.hpp"
#include "smdp/harness/zoo.hpp"
#include "smdp/learner.hpp"
#include "smdp/operators.hpp"
#include "smdp/rvi.hpp"
#include "smdp/trace.hpp"

namespace smdp::harness {

namespace {

// Tolerances and budgets for the ten criteria.
constexpr double kOracleTol = 1e-8;
constexpr double kOperatorTol = 1e-12;
constexpr double kScalingTol = 1e-3;
constexpr double kMonotoneSlack = 1e-12;
constexpr double kResidualTol = 0.1;
constexpr double kGainTol = 0.05;
constexpr double kPointTol = 0.1;
constexpr double kWindow = 0.1;
constexpr double kIdentityTol = 1e-12;
constexpr double kDegenerationTol = 1e-12;

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(4);
  os << v;
  return os.str();
}

double elapsed(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct Outcome {
  bool ok = true;
  std::string detail;
  void fail(const std::string& why) {
    ok = false;
    if (!detail.empty()) detail += "; ";
    detail += why;
  }
  void note(const std::string& what) {
    if (!detail.empty()) detail += "; ";
    detail += what;
  }
};

std::vector<double> random_vector(SeededRng& rng, std::size_t d, double radius) {
  std::vector<double> x(d);
  for (double& v : x) v = radius * (2.0 * rng.uniform() - 1.0);
  return x;
}

Outcome oracle_agreement() {
  Outcome o;
  for (const char* name : {"unit1", "cycle2", "wc3", "smdp-exp"}) {
    const auto e = zoo_entry(name);
    const auto f = RateFunction::mean(e.model.num_pairs());
    const auto oracle = gain_oracle(e.model);
    const auto t0 = std::chrono::steady_clock::now();
    const auto sol = classical_rvi(e.model, f, QTable(e.model.num_states(), e.model.num_actions()));
    const double secs = elapsed(t0);
    const double gap = std::abs(sol.rstar - oracle.rstar);
    const double res = aoe_residual(e.model, f, sol.q.values());
    o.note(std::string(name) + " |f-r*|=" + fmt(gap) + " res=" + fmt(res));
    if (gap > kOracleTol) o.fail(std::string(name) + ": gain gap above 1e-8");
    if (res > kOracleTol) o.fail(std::string(name) + ": residual above 1e-8");
    if (secs >= 1.0) o.fail(std::string(name) + ": solve took " + fmt(secs) + "s");
  }
  return o;
}

Outcome zero_reward() {
  Outcome o;
  const auto e = zoo_entry("wc3-zero");
  const auto f = RateFunction::mean(e.model.num_pairs());
  const auto sol = classical_rvi(e.model, f, QTable(e.model.num_states(), e.model.num_actions()));
  const auto& q = sol.q.vec();
  const double span = *std::max_element(q.begin(), q.end()) - *std::min_element(q.begin(), q.end());
  o.note("span=" + fmt(span) + " f(q)=" + fmt(sol.rstar));
  if (span > kOracleTol) o.fail("span above 1e-8");
  if (std::abs(sol.rstar) > kOracleTol) o.fail("f(q) not within 1e-8 of 0");
  return o;
}

Outcome operator_properties(std::uint64_t seed) {
  Outcome o;
  SeededRng rng(seed, 3);
  double worst_ne = 0.0, worst_tr = 0.0;
  const auto zoo = model_zoo();
  for (int k = 0; k < 1000; ++k) {
    const auto& m = zoo[static_cast<std::size_t>(k) % zoo.size()].model;
    const std::size_t d = m.num_pairs();
    const auto q = random_vector(rng, d, 10.0);
    const auto p = random_vector(rng, d, 10.0);
    const double c = 20.0 * rng.uniform() - 10.0;
    for (bool zero : {false, true}) {
      auto T = [&](const std::vector<double>& x) {
        return zero ? operator_T_zero(m, x, m.t_min()) : operator_T(m, x, m.t_min());
      };
      const auto tq = T(q);
      worst_ne = std::max(worst_ne, sup_distance(tq, T(p)) - sup_distance(q, p));
      auto qc = q;
      for (double& v : qc) v += c;
      auto shifted = tq;
      for (double& v : shifted) v += c;
      worst_tr = std::max(worst_tr, sup_distance(T(qc), shifted));
    }
  }
  o.note("max expansion=" + fmt(worst_ne) + " max translation error=" + fmt(worst_tr));
  if (worst_ne > kOperatorTol) o.fail("nonexpansiveness violated");
  if (worst_tr > kOperatorTol) o.fail("translation identity violated");
  return o;
}

Outcome scaling_limit(std::uint64_t seed) {
  Outcome o;
  const auto e = zoo_entry("wc3");
  const std::size_t d = e.model.num_pairs();
  const double abar = e.model.t_min();
  SeededRng rng(seed, 4);
  std::vector<std::vector<double>> grid;
  for (int k = 0; k < 200; ++k) grid.push_back(random_vector(rng, d, 1.0));
  for (std::size_t i = 0; i < d; ++i) {
    std::vector<double> u(d, 0.0);
    u[i] = 1.0;
    grid.push_back(u);
    for (double& v : u) v = -v;
    grid.push_back(u);
  }
  const std::vector<std::pair<std::string, RateFunction>> fs = {
      {"mean", RateFunction::mean(d)},
      {"affine", RateFunction::affine(0.75, {0.1, 0.3, 0.2, 0.1, 0.2, 0.4})},
      {"max", RateFunction::max_over(d, 1.5, 1.0, {})},
      {"max-subset", RateFunction::max_over(d, -2.0, 0.5, {0, 3, 5})}};
  for (const auto& [name, f] : fs) {
    double prev = std::numeric_limits<double>::infinity();
    double err = 0.0;
    bool monotone = true;
    for (int k = 0; k <= 20; ++k) {
      const double c = std::ldexp(1.0, k);
      err = 0.0;
      for (const auto& q : grid) {
        auto cq = q;
        for (double& v : cq) v *= c;
        auto hc = h_eval(e.model, f, cq, abar);
        const auto hi = h_infinity_eval(e.model, f, q, abar);
        for (std::size_t i = 0; i < d; ++i) err = std::max(err, std::abs(hc[i] / c - hi[i]));
      }
      if (err > prev + kMonotoneSlack) monotone = false;
      prev = err;
    }
    o.note(name + " err(2^20)=" + fmt(err));
    if (err > kScalingTol) o.fail(name + ": error at 2^20 above 1e-3");
    if (!monotone) o.fail(name + ": error not nonincreasing in c");
  }
  return o;
}

Outcome ode_battery(std::uint64_t seed) {
  Outcome o;
  for (const char* name : {"wc3", "smdp-exp"}) {
    const auto e = zoo_entry(name);
    const auto rep = ode_check(e.model, RateFunction::mean(e.model.num_pairs()), OdeSettings{}, seed);
    o.note(std::string(name) + " dist-increase=" + fmt(rep.max_distance_increase) +
           " decomposition=" + fmt(rep.max_decomposition_error) +
           " terminal=" + fmt(rep.max_terminal_norm));
    if (!rep.distance_ok) o.fail(std::string(name) + ": distance to the AOE point increased");
    if (!rep.decomposition_ok) o.fail(std::string(name) + ": decomposition error above 1e-6");
    if (!rep.stability_ok) o.fail(std::string(name) + ": scaling-limit flow not within 1e-4 at t=40");
  }
  return o;
}

ExperimentConfig pinned_config(const ModelZooEntry& e, std::uint64_t iters,
                               const std::vector<std::uint64_t>& seeds) {
  ExperimentConfig c;
  c.model_name = e.name;
  c.model = e.model;
  const std::size_t d = e.model.num_pairs();
  c.f = RateFunction::mean(d);
  c.t_min_lower_bound = e.model.t_min();
  c.lipschitz_bound = c.f.lipschitz_bound();
  const double a_star = 2.0 / c.t_min_lower_bound + c.lipschitz_bound;
  c.alpha = StepSchedule::class2(a_star + 1.0);
  c.sigma = a_star + 1.0;
  c.beta = StepSchedule::scaled(c.alpha, c.sigma);
  c.beta_scaled_alpha = true;
  c.scheduler = AsyncScheduler::uniform_chain(d);
  c.iters = iters;
  c.checkpoint_every = 1'000;
  c.snapshot_every = 10'000;
  c.seeds = seeds;
  return c;
}

Outcome set_convergence(const AcceptanceOptions& opts, double& worst_secs) {
  Outcome o;
  for (const char* name : {"wc3", "smdp-exp"}) {
    const auto e = zoo_entry(name);
    const auto cfg = pinned_config(e, 500'000, opts.seeds);
    const auto t0 = std::chrono::steady_clock::now();
    const auto rep = learn(cfg, {opts.jobs, std::nullopt});
    worst_secs = std::max(worst_secs, elapsed(t0));
    double worst_res = 0.0, worst_gap = 0.0;
    for (const auto& s : rep.seeds) {
      if (s.error) {
        o.fail(std::string(name) + " seed " + std::to_string(s.seed) + " diverged");
        continue;
      }
      const double cut = (1.0 - kWindow) * static_cast<double>(cfg.iters);
      for (const auto& c : s.trace.checkpoints) {
        if (static_cast<double>(c.n) < cut) continue;
        worst_res = std::max(worst_res, c.residual_inf);
        worst_gap = std::max(worst_gap, std::abs(c.f_q - e.rstar));
      }
    }
    o.note(std::string(name) + " (A=" + fmt(cfg.alpha.scale()) + ") window max residual=" +
           fmt(worst_res) + " max |f-r*|=" + fmt(worst_gap));
    if (worst_res > kResidualTol) o.fail(std::string(name) + ": residual above 0.1");
    if (worst_gap > kGainTol) o.fail(std::string(name) + ": |f - r*| above 0.05");
  }
  return o;
}

Outcome point_convergence(const AcceptanceOptions& opts) {
  Outcome o;
  for (const char* name : {"wc3", "smdp-exp"}) {
    const auto e = zoo_entry(name);
    const auto cfg = pinned_config(e, 1'000'000, opts.seeds);
    const auto rep = learn(cfg, {opts.jobs, std::nullopt});
    std::size_t points = 0;
    std::string verdicts;
    for (const auto& s : rep.seeds) {
      if (s.error) continue;
      const auto c = convergence_detector(s.trace, kWindow, kPointTol, kResidualTol);
      if (c.verdict == ConvergenceVerdict::ConvergedToPoint) ++points;
      verdicts += std::string(verdicts.empty() ? "" : ",") + to_string(c.verdict);
    }
    const std::size_t need = rep.seeds.size() >= 5 ? rep.seeds.size() - 1 : rep.seeds.size();
    o.note(std::string(name) + " point verdicts " + std::to_string(points) + "/" +
           std::to_string(rep.seeds.size()) + " [" + verdicts + "]");
    if (points < need) o.fail(std::string(name) + ": too few ConvergedToPoint verdicts");
  }
  // Counterexample: a power-law beta with exponent 0.75 decays too slowly.
  const auto e = zoo_entry("wc3");
  auto cfg = pinned_config(e, 1, {1});
  const auto v = validate_params(thresholds_of(cfg), cfg.alpha, StepSchedule::power_law(1.0, 0.75),
                                 UpdateMode::Asynchronous);
  if (v.pass)
    o.fail("validator accepted the power-law beta counterexample");
  else
    o.note("power-law beta rejected");
  return o;
}

Outcome noise_decomposition(std::uint64_t seed) {
  Outcome o;
  const auto e = zoo_entry("smdp-exp");
  const std::size_t d = e.model.num_pairs();
  const auto f = RateFunction::mean(d);
  LearnerConfig cfg;
  cfg.alpha = StepSchedule::class2(6.0);
  cfg.beta = StepSchedule::scaled(cfg.alpha, 6.0);
  cfg.scheduler = AsyncScheduler::uniform_random(d, 3);

  double worst = 0.0;
  bool off_support_zero = true;
  auto st = make_learner_state(e.model, seed);
  for (int k = 0; k < 10'000; ++k) {
    const LearnerState before = st;
    const auto rec = learner_step(e.model, f, cfg, st);
    const auto nd = compute_noise_decomposition(e.model, f, before, rec);
    std::vector<bool> in_y(d, false);
    for (std::size_t j = 0; j < rec.updated.size(); ++j) {
      const std::size_t i = rec.updated[j];
      in_y[i] = true;
      const double lhs = nd.alpha_bar * rec.increments[j];
      worst = std::max(worst, std::abs(lhs - (nd.drift[i] + nd.martingale[i] + nd.bias[i])));
    }
    for (std::size_t i = 0; i < d; ++i)
      if (!in_y[i] && (nd.martingale[i] != 0.0 || nd.bias[i] != 0.0)) off_support_zero = false;
  }

  // Pinned holding-time estimates: the floor 1/ln(n+e) drops below t_min = 0.5
  // after a handful of steps, so the audit starts at n = 10.
  double worst_bias = 0.0;
  auto pinned = make_learner_state(e.model, seed + 1);
  const auto& t = e.model.expectations().t;
  for (int k = 0; k < 10'010; ++k) {
    for (std::size_t i = 0; i < d; ++i) pinned.t[i] = t[i];
    const LearnerState before = pinned;
    const auto rec = learner_step(e.model, f, cfg, pinned);
    if (k < 10) continue;
    const auto nd = compute_noise_decomposition(e.model, f, before, rec);
    for (double b : nd.bias) worst_bias = std::max(worst_bias, std::abs(b));
  }
  o.note("max identity error=" + fmt(worst) + " max |eps| with pinned T=" + fmt(worst_bias));
  if (worst > kIdentityTol) o.fail("reconstruction identity off by more than 1e-12");
  if (!off_support_zero) o.fail("noise nonzero outside the update set");
  if (worst_bias != 0.0) o.fail("bias term nonzero with exact holding times");
  return o;
}

Outcome degeneration() {
  Outcome o;
  for (const char* name : {"wc3", "unit1", "cycle2"}) {
    const auto e = zoo_entry(name);
    const std::size_t d = e.model.num_pairs();
    const auto f = RateFunction::mean(d);
    LearnerConfig cfg;
    cfg.alpha = StepSchedule::class2(4.0);
    cfg.beta = StepSchedule::scaled(cfg.alpha, 4.0);
    cfg.scheduler = AsyncScheduler::synchronous(d);
    const auto& t = e.model.expectations().t;
    auto st = make_learner_state(e.model, 1, std::nullopt,
                                 QTable(e.model.num_actions(), std::vector<double>(t)));
    std::vector<double> q(d, 0.0);
    double worst = 0.0;
    for (std::uint64_t n = 0; n < 1000; ++n) {
      if (learner_eta(cfg, n) > e.model.t_min()) {
        o.fail(std::string(name) + ": floor above t_min");
        break;
      }
      q = rvi_step(e.model, f, q, alpha(cfg.alpha, n));
      learner_step(e.model, f, cfg, st);
      worst = std::max(worst, sup_distance(q, st.q.values()));
    }
    o.note(std::string(name) + " max gap=" + fmt(worst));
    if (worst > kDegenerationTol) o.fail(std::string(name) + ": iterates differ by more than 1e-12");
  }
  return o;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome reproducibility(const AcceptanceOptions& opts) {
  Outcome o;
  const std::uint64_t seed = opts.seeds.empty() ? 7 : opts.seeds.front();
  const std::string text = R"({"model": "wc3", "alpha": {"class": 2, "A": 4}, "sigma": 4,
      "scheduler": {"kind": "markov_chain"}, "iters": 500000, "seeds": [)" +
                           std::to_string(seed) + "]}";
  const auto cfg = parse_experiment_config(text);
  const auto base = std::filesystem::temp_directory_path() /
                    ("smdp_accept_" + std::to_string(std::chrono::steady_clock::now().time_since_epoch().count()));
  const auto a = base / "a", b = base / "b";
  learn(cfg, {1, a});
  learn(cfg, {1, b});
  const std::string file = "trace_seed" + std::to_string(seed) + ".csv";
  const std::string ta = slurp(a / file), tb = slurp(b / file);
  const bool same = !ta.empty() && ta == tb && slurp(a / "summary.json") == slurp(b / "summary.json");
  std::error_code ec;
  std::filesystem::remove_all(base, ec);
  o.note(std::to_string(ta.size()) + " trace bytes, hash " + config_hash(cfg));
  if (!same) o.fail("traces differ between executions");
  return o;
}

}  // namespace

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts) {
  struct Entry {
    int id;
    const char* name;
    double budget;
    std::function<Outcome(double&)> fn;
  };
  const std::uint64_t seed = opts.seeds.empty() ? 7 : opts.seeds.front();
  const std::vector<Entry> entries = {
      {1, "oracle-agreement", 4.0, [](double&) { return oracle_agreement(); }},
      {2, "zero-reward-structure", 1.0, [](double&) { return zero_reward(); }},
      {3, "operator-properties", 1.0, [&](double&) { return operator_properties(seed); }},
      {4, "scaling-limit", 5.0, [&](double&) { return scaling_limit(seed); }},
      {5, "ode-battery", 30.0, [&](double&) { return ode_battery(seed); }},
      {6, "set-convergence", 60.0, [&](double& per) { return set_convergence(opts, per); }},
      {7, "point-convergence", 150.0, [&](double&) { return point_convergence(opts); }},
      {8, "noise-decomposition", 10.0, [&](double&) { return noise_decomposition(seed); }},
      {9, "degeneration", 1.0, [](double&) { return degeneration(); }},
      {10, "reproducibility", 60.0, [&](double&) { return reproducibility(opts); }},
  };

  std::vector<CriterionResult> results;
  for (const auto& s : entries) {
    if (!opts.only.empty() && std::find(opts.only.begin(), opts.only.end(), s.id) == opts.only.end())
      continue;
    CriterionResult r{s.id, s.name, false, "", 0.0, s.budget};
    double per_model = 0.0;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      const Outcome out = s.fn(per_model);
      r.seconds = elapsed(t0);
      r.passed = out.ok;
      r.detail = out.detail;
    } catch (const std::exception& e) {
      r.seconds = elapsed(t0);
      r.detail = std::string("exception: ") + e.what();
    }
    // Criterion 6 budgets each model separately.
    const double timed = s.id == 6 ? per_model : r.seconds;
    if (timed > s.budget) {
      r.passed = false;
      r.detail += "; over the time budget";
    }
    results.push_back(r);
    if (opts.on_result) opts.on_result(r);
  }
  return results;
}

std::string format_criterion(const CriterionResult& r) {
  std::ostringstream os;
  os.precision(3);
  os << (r.passed ? "[PASS] " : "[FAIL] ") << r.id << ' ' << r.name << " (" << std::fixed
     << r.seconds << "s / " << std::defaultfloat << r.budget_seconds << "s): " << r.detail;
  return os.str();
}

}  // namespace smdp::harness
