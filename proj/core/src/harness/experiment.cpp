#include "smdp/harness/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <limits>
#include <cmath>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "../json_support.hpp"
#include "smdp/ode.hpp"
#include "smdp/operators.hpp"

namespace smdp::harness {

using detail::json;

namespace {

void write_file(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  out << content;
  if (!out) throw InputError("failed writing " + path.string());
}

std::string join(const std::vector<std::size_t>& v, const char* sep = " ") {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += sep;
    s += std::to_string(v[i]);
  }
  return s;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

json policy_json(const DeterministicPolicy& p) { return p.actions; }

}  // namespace

void parallel_for(std::size_t count, std::size_t jobs, const std::function<void(std::size_t)>& task) {
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  jobs = std::min(jobs, count);
  if (jobs <= 1) {
    for (std::size_t i = 0; i < count; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first;
  std::mutex mu;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < jobs; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          task(i);
        } catch (...) {
          std::lock_guard lock(mu);
          if (!first) first = std::current_exception();
        }
      }
    });
  for (auto& t : pool) t.join();
  if (first) std::rethrow_exception(first);
}

ModelCheckReport model_check(const SmdpModel& model) {
  return {check_model_assumptions(model), classify_communication(model), model.t_min()};
}

std::string format_model_check(const SmdpModel& model, const ModelCheckReport& rep, bool as_json) {
  const bool wc = is_weakly_communicating(rep.communication);
  if (as_json) {
    json j;
    j["num_states"] = model.num_states();
    j["num_actions"] = model.num_actions();
    j["t_min"] = rep.t_min;
    j["assumptions_hold"] = rep.assumptions.holds;
    j["epsilon"] = rep.assumptions.epsilon;
    j["assumption_violations"] = rep.assumptions.violations;
    j["weakly_communicating"] = wc;
    if (wc) {
      const auto& w = std::get<WeaklyCommunicating>(rep.communication);
      j["closed_class"] = w.closed_class;
      j["transient"] = w.transient;
    } else {
      const auto& n = std::get<NotWeaklyCommunicating>(rep.communication);
      j["witness"] = n.witness;
      j["closed_classes"] = n.closed_classes;
      j["trapping_states"] = n.trapping_states;
    }
    json pairs = json::array();
    for (const auto& m : rep.assumptions.pairs)
      pairs.push_back({{"pair", m.pair},
                       {"holding_mean", m.holding_mean},
                       {"holding_second_moment", m.holding_second_moment},
                       {"reward_mean", m.reward_mean},
                       {"reward_second_moment", m.reward_second_moment}});
    j["pairs"] = pairs;
    return j.dump(2) + "\n";
  }
  std::ostringstream os;
  os << "states " << model.num_states() << ", actions " << model.num_actions() << ", t_min "
     << fmt(rep.t_min) << "\n";
  os << "holding-time assumptions: " << (rep.assumptions.holds ? "hold" : "VIOLATED")
     << " (eps = " << fmt(rep.assumptions.epsilon) << ")\n";
  for (const auto& v : rep.assumptions.violations) os << "  " << v << "\n";
  if (wc) {
    const auto& w = std::get<WeaklyCommunicating>(rep.communication);
    os << "weakly communicating: closed class {" << join(w.closed_class, ", ") << "}";
    if (!w.transient.empty()) os << ", transient {" << join(w.transient, ", ") << "}";
    os << "\n";
  } else {
    os << "not weakly communicating: " << std::get<NotWeaklyCommunicating>(rep.communication).witness
       << "\n";
  }
  return os.str();
}

std::string format_oracle(const SmdpModel& model, const GainOracleResult& res, bool as_json) {
  if (as_json) {
    json j;
    j["rstar"] = res.rstar;
    json per = json::array();
    for (const auto& pg : res.per_policy) {
      json classes = json::array();
      for (const auto& c : pg.classes) classes.push_back({{"states", c.states}, {"gain", c.gain}});
      per.push_back({{"policy", policy_json(pg.policy)}, {"classes", classes}});
    }
    j["per_policy"] = per;
    json opt = json::array();
    for (const auto& p : res.optimal_policies) opt.push_back(policy_json(p));
    j["optimal_policies"] = opt;
    return j.dump(2) + "\n";
  }
  std::ostringstream os;
  os << "rstar = " << fmt(res.rstar) << "\n";
  os << res.per_policy.size() << " deterministic policies over " << model.num_states()
     << " states, " << res.optimal_policies.size() << " optimal:\n";
  for (const auto& p : res.optimal_policies) os << "  [" << join(p.actions) << "]\n";
  return os.str();
}

LearnReport learn(const ExperimentConfig& cfg, const RunOptions& opts) {
  LearnReport rep;
  rep.config_hash = config_hash(cfg);
  rep.validation = validate_params(thresholds_of(cfg), cfg.alpha, cfg.beta, mode_of(cfg));
  if (!rep.validation.pass && !cfg.override_validation) {
    std::string msg = "parameter validation failed (A_* = " + fmt(rep.validation.a_star) + "):";
    for (const auto& v : rep.validation.violations) msg += "\n  " + v;
    throw ValidationFailure(msg, rep.validation);
  }

  rep.seeds.resize(cfg.seeds.size());
  parallel_for(cfg.seeds.size(), opts.jobs, [&](std::size_t k) {
    SeedResult& out = rep.seeds[k];
    out.seed = cfg.seeds[k];
    LearnerState st;
    try {
      out.trace = run(cfg.model, cfg.f, to_run_config(cfg, out.seed), st);
    } catch (const RunDiverged& e) {
      out.trace = e.partial();
      out.error = e.what();
      return;
    }
    out.final_q = st.q.vec();
    out.final_t = st.t.vec();
    out.greedy = greedy_policy(st.q);
    out.greedy_gain = evaluate_policy(cfg.model, out.greedy).min_gain();
    try {
      out.convergence = convergence_detector(out.trace, 0.1, 0.1, 0.1);
    } catch (const InputError&) {
      // Too few snapshots for a verdict.
    }
  });

  if (opts.out_dir) {
    for (const auto& s : rep.seeds)
      write_file(*opts.out_dir / ("trace_seed" + std::to_string(s.seed) + ".csv"), trace_csv(s.trace));
    write_file(*opts.out_dir / "config.json", serialize_experiment_config(cfg) + "\n");
    write_file(*opts.out_dir / "summary.json", format_learn(rep, true));
  }
  return rep;
}

std::string format_learn(const LearnReport& rep, bool as_json) {
  if (as_json) {
    json j;
    j["config_hash"] = rep.config_hash;
    j["validation"] = {{"pass", rep.validation.pass},
                       {"a_star", rep.validation.a_star},
                       {"violations", rep.validation.violations},
                       {"notes", rep.validation.notes}};
    json seeds = json::array();
    for (const auto& s : rep.seeds) {
      json e;
      e["seed"] = s.seed;
      if (s.error) e["error"] = *s.error;
      if (!s.trace.checkpoints.empty()) {
        const auto& c = s.trace.checkpoints.back();
        e["n"] = c.n;
        e["f_q"] = c.f_q;
        e["residual_inf"] = c.residual_inf;
        e["t_err_max"] = c.t_err_max;
      }
      e["final_q"] = s.final_q;
      e["greedy_policy"] = policy_json(s.greedy);
      e["greedy_gain"] = s.greedy_gain;
      if (s.convergence) {
        e["verdict"] = to_string(s.convergence->verdict);
        e["window_max_residual"] = s.convergence->max_residual;
        e["window_max_pairwise"] = s.convergence->max_pairwise;
      }
      seeds.push_back(e);
    }
    j["seeds"] = seeds;
    return j.dump(2) + "\n";
  }
  std::ostringstream os;
  os << "config " << rep.config_hash << ", A_* = " << fmt(rep.validation.a_star)
     << (rep.validation.pass ? ", thresholds satisfied" : ", thresholds FAILED (override)") << "\n";
  for (const auto& v : rep.validation.violations) os << "  violation: " << v << "\n";
  for (const auto& s : rep.seeds) {
    os << "seed " << s.seed << ": ";
    if (s.error) {
      os << "aborted: " << *s.error << "\n";
      continue;
    }
    const auto& c = s.trace.checkpoints.back();
    os << "n=" << c.n << " f(Q)=" << fmt(c.f_q) << " residual=" << fmt(c.residual_inf)
       << " |T-t|max=" << fmt(c.t_err_max) << " greedy=[" << join(s.greedy.actions)
       << "] gain=" << fmt(s.greedy_gain);
    if (s.convergence) os << " verdict=" << to_string(s.convergence->verdict);
    os << "\n";
  }
  return os.str();
}

std::vector<SweepCell> sweep(const ExperimentConfig& cfg, const RunOptions& opts) {
  const auto As = cfg.sweep.A.empty() ? std::vector<double>{cfg.alpha.scale()} : cfg.sweep.A;
  const auto sigmas = cfg.sweep.sigma.empty() ? std::vector<double>{cfg.sigma} : cfg.sweep.sigma;
  const auto scheds = cfg.sweep.schedulers.empty() ? std::vector<AsyncScheduler>{cfg.scheduler}
                                                   : cfg.sweep.schedulers;
  struct Job {
    ExperimentConfig cfg;
    std::uint64_t seed;
    std::size_t index;
  };
  std::vector<Job> jobs;
  std::vector<SweepCell> cells;
  for (double A : As)
    for (double sg : sigmas)
      for (const auto& sch : scheds) {
        ExperimentConfig c = cfg;
        c.alpha = c.alpha.kind() == ScheduleKind::Class1 ? StepSchedule::class1(A)
                                                         : StepSchedule::class2(A);
        c.sigma = sg;
        if (c.beta_scaled_alpha) c.beta = StepSchedule::scaled(c.alpha, sg);
        c.scheduler = sch;
        const auto v = validate_params(thresholds_of(c), c.alpha, c.beta, mode_of(c));
        for (auto seed : cfg.seeds) {
          SweepCell cell;
          cell.A = A;
          cell.sigma = sg;
          cell.scheduler = sch.describe();
          cell.seed = seed;
          cell.validation_pass = v.pass;
          if (v.pass || c.override_validation) jobs.push_back({c, seed, cells.size()});
          cells.push_back(cell);
        }
      }

  parallel_for(jobs.size(), opts.jobs, [&](std::size_t k) {
    const Job& job = jobs[k];
    SweepCell& cell = cells[job.index];
    RunTrace trace;
    try {
      trace = run(job.cfg.model, job.cfg.f, to_run_config(job.cfg, job.seed));
    } catch (const RunDiverged& e) {
      trace = e.partial();
      cell.error = e.what();
    }
    cell.ran = true;
    if (!trace.checkpoints.empty()) {
      cell.final_f = trace.checkpoints.back().f_q;
      cell.final_residual = trace.checkpoints.back().residual_inf;
    }
    if (opts.out_dir)
      write_file(*opts.out_dir / ("cell" + std::to_string(job.index) + "_seed" +
                                  std::to_string(job.seed) + ".csv"),
                 trace_csv(trace));
  });
  if (opts.out_dir) write_file(*opts.out_dir / "sweep.csv", format_sweep(cells, false));
  return cells;
}

std::string format_sweep(const std::vector<SweepCell>& cells, bool as_json) {
  if (as_json) {
    json arr = json::array();
    for (const auto& c : cells) {
      json e = {{"A", c.A},           {"sigma", c.sigma},       {"scheduler", c.scheduler},
                {"seed", c.seed},     {"validation_pass", c.validation_pass},
                {"ran", c.ran},       {"final_f", c.final_f},   {"final_residual", c.final_residual}};
      if (c.error) e["error"] = *c.error;
      arr.push_back(e);
    }
    return arr.dump(2) + "\n";
  }
  std::ostringstream os;
  os << "A,sigma,scheduler,seed,validation_pass,ran,final_f,final_residual\n";
  for (const auto& c : cells)
    os << fmt(c.A) << ',' << fmt(c.sigma) << ",\"" << c.scheduler << "\"," << c.seed << ','
       << c.validation_pass << ',' << c.ran << ',' << fmt(c.final_f) << ','
       << fmt(c.final_residual) << "\n";
  return os.str();
}

RviReport solve_rvi(const ExperimentConfig& cfg, const std::optional<std::filesystem::path>& out_dir) {
  RviOptions o;
  o.alpha_bar = cfg.rvi.alpha_bar;
  o.max_iters = cfg.rvi.max_iters;
  o.tol = cfg.rvi.tol;
  const QTable q0 = cfg.q0 ? QTable(cfg.model.num_actions(), *cfg.q0)
                           : QTable(cfg.model.num_states(), cfg.model.num_actions());
  RviReport rep;
  rep.solution = classical_rvi(cfg.model, cfg.f, q0, o);
  rep.f_value = cfg.f.eval(rep.solution.q.values());
  rep.aoe_residual = aoe_residual(cfg.model, cfg.f, rep.solution.q.values());
  if (out_dir) {
    write_file(*out_dir / "solution.json", format_rvi(rep, true));
    std::ostringstream csv;
    csv << "iteration,residual\n";
    for (std::size_t k = 0; k < rep.solution.residual_history.size(); ++k) {
      char buf[64];
      const auto r = std::to_chars(buf, buf + sizeof buf, rep.solution.residual_history[k]);
      csv << k << ',' << std::string_view(buf, static_cast<std::size_t>(r.ptr - buf)) << '\n';
    }
    write_file(*out_dir / "residuals.csv", csv.str());
  }
  return rep;
}

std::string format_rvi(const RviReport& rep, bool as_json) {
  if (as_json) {
    json j = {{"q", rep.solution.q.vec()},
              {"rstar", rep.solution.rstar},
              {"iterations", rep.solution.iterations},
              {"residual", rep.solution.residual},
              {"aoe_residual", rep.aoe_residual}};
    return j.dump(2) + "\n";
  }
  std::ostringstream os;
  os << "f(q) = " << fmt(rep.f_value) << " after " << rep.solution.iterations
     << " iterations, AOE residual " << fmt(rep.aoe_residual) << "\nq =";
  for (double v : rep.solution.q.values()) os << ' ' << fmt(v);
  os << "\n";
  return os.str();
}

OdeCheckReport ode_check(const SmdpModel& model, const RateFunction& f, const OdeSettings& s,
                         std::uint64_t seed) {
  const std::size_t d = model.num_pairs();
  const double abar = model.t_min();
  RviOptions ro;
  ro.keep_history = false;
  const auto sol = classical_rvi(model, f, QTable(model.num_states(), model.num_actions()), ro);
  const double rstar = sol.rstar;
  const auto& qbar = sol.q.vec();

  SeededRng rng(seed, 0x0de);
  auto random_point = [&](double radius) {
    std::vector<double> x(d);
    for (double& v : x) v = radius * (2.0 * rng.uniform() - 1.0);
    return x;
  };
  const auto every = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(0.1 / s.dt)));

  OdeCheckReport rep;
  const VectorField hprime = make_field(model, f, {FieldKind::HPrime, abar, rstar});
  const VectorField h = make_field(model, f, {FieldKind::H, abar, 0.0});
  for (std::size_t k = 0; k < s.starts; ++k) {
    const auto x0 = random_point(10.0);
    const auto traj = integrate_ode(hprime, x0, s.t_end, s.dt, 1);
    double prev = sup_distance(traj.states.front(), qbar);
    for (std::size_t m = 1; m < traj.states.size(); ++m) {
      const double cur = sup_distance(traj.states[m], qbar);
      rep.max_distance_increase = std::max(rep.max_distance_increase, cur - prev);
      prev = cur;
    }

    // Joint system (x, y, z): x' = h(x), y' = h'(y), z' = abar r* - abar f(y + z 1).
    VectorField joint = [&](std::span<const double> w, std::span<double> out) {
      std::span<const double> x = w.subspan(0, d), y = w.subspan(d, d);
      const double z = w[2 * d];
      hprime(y, out.subspan(d, d));
      h(x, out.subspan(0, d));
      std::vector<double> yz(y.begin(), y.end());
      for (double& v : yz) v += z;
      out[2 * d] = abar * rstar - abar * f.eval(yz);
    };
    std::vector<double> w0(2 * d + 1, 0.0);
    std::copy(x0.begin(), x0.end(), w0.begin());
    std::copy(x0.begin(), x0.end(), w0.begin() + static_cast<std::ptrdiff_t>(d));
    const auto jt = integrate_ode(joint, w0, s.t_end, s.dt, every);
    for (const auto& w : jt.states)
      for (std::size_t i = 0; i < d; ++i)
        rep.max_decomposition_error =
            std::max(rep.max_decomposition_error, std::abs(w[i] - w[d + i] - w[2 * d]));
  }

  const VectorField hinf = make_field(model, f, {FieldKind::HInfinity, abar, 0.0});
  for (std::size_t k = 0; k < s.starts_infinity; ++k) {
    const auto traj = integrate_ode(hinf, random_point(1.0), s.t_end_infinity, s.dt,
                                    std::numeric_limits<std::size_t>::max());
    rep.max_terminal_norm = std::max(rep.max_terminal_norm, sup_norm(traj.states.back()));
  }

  rep.distance_ok = rep.max_distance_increase <= 1e-9;
  rep.decomposition_ok = rep.max_decomposition_error <= 1e-6;
  rep.stability_ok = rep.max_terminal_norm <= 1e-4;
  return rep;
}

std::string format_ode_check(const OdeCheckReport& rep, bool as_json) {
  if (as_json) {
    json j = {{"max_distance_increase", rep.max_distance_increase},
              {"max_decomposition_error", rep.max_decomposition_error},
              {"max_terminal_norm", rep.max_terminal_norm},
              {"distance_ok", rep.distance_ok},
              {"decomposition_ok", rep.decomposition_ok},
              {"stability_ok", rep.stability_ok}};
    return j.dump(2) + "\n";
  }
  std::ostringstream os;
  os << (rep.distance_ok ? "ok  " : "FAIL") << " distance to the AOE point never grows (max increase "
     << fmt(rep.max_distance_increase) << ")\n";
  os << (rep.decomposition_ok ? "ok  " : "FAIL") << " x = y + z 1 along the flows (max error "
     << fmt(rep.max_decomposition_error) << ")\n";
  os << (rep.stability_ok ? "ok  " : "FAIL") << " scaling-limit flows reach the origin (max terminal norm "
     << fmt(rep.max_terminal_norm) << ")\n";
  return os.str();
}

}  // namespace smdp::harness
