#include "smdp/trace.hpp"

#include <algorithm>
#include <charconv>
#include <limits>
#include <cmath>
#include <sstream>
#include <system_error>

namespace smdp {

namespace {

Checkpoint make_checkpoint(const SmdpModel& model, const RateFunction& f, const LearnerState& st,
                           bool snapshot) {
  Checkpoint c;
  c.n = st.n();
  c.f_q = f.eval(st.q.values());
  c.residual_inf = aoe_residual(model, f, st.q.values());
  const auto& t = model.expectations().t;
  for (std::size_t i = 0; i < t.size(); ++i)
    c.t_err_max = std::max(c.t_err_max, std::abs(st.t[i] - t[i]));
  if (snapshot) c.q = st.q.vec();
  return c;
}

void put(std::ostream& os, double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  os.write(buf, r.ptr - buf);
}

double parse_double(std::string_view s, std::size_t line) {
  double v = 0.0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size()) {
    // from_chars rejects "inf"/"nan" spellings produced by some writers.
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan" || s == "-nan") return std::numeric_limits<double>::quiet_NaN();
    throw InputError("trace CSV line " + std::to_string(line) + ": bad number '" +
                     std::string(s) + "'");
  }
  return v;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find(',', start);
    out.push_back(line.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

}  // namespace

RunTrace run(const SmdpModel& model, const RateFunction& f, const RunConfig& cfg,
             LearnerState& state) {
  if (f.dim() != model.num_pairs()) throw DomainError("rate function dimension does not match the model");
  if (cfg.checkpoint_every == 0) throw ParameterError("checkpoint_every must be positive");

  const auto report =
      validate_params(cfg.thresholds, cfg.learner.alpha, cfg.learner.beta, cfg.mode);
  RunTrace trace;
  trace.master_seed = cfg.seed;
  trace.config_hash = cfg.config_hash;
  trace.dim = model.num_pairs();
  trace.validation_violations = report.violations;
  trace.override_used = cfg.override_validation;
  if (!report.pass && !cfg.override_validation) {
    std::string msg = "parameter validation failed:";
    for (const auto& v : report.violations) msg += "\n  " + v;
    throw ValidationFailure(msg, report);
  }

  state = make_learner_state(model, cfg.seed, cfg.q0, cfg.t0);
  auto snap_due = [&](std::uint64_t n) {
    return cfg.snapshot_every != 0 && (n % cfg.snapshot_every == 0 || n == cfg.iters);
  };
  trace.checkpoints.push_back(make_checkpoint(model, f, state, snap_due(0)));
  try {
    while (state.n() < cfg.iters) {
      learner_step(model, f, cfg.learner, state);
      const auto n = state.n();
      if (n % cfg.checkpoint_every == 0 || n == cfg.iters)
        trace.checkpoints.push_back(make_checkpoint(model, f, state, snap_due(n)));
    }
  } catch (const DivergenceError& e) {
    trace.aborted = e.what();
    throw RunDiverged(e.what(), std::move(trace));
  }
  return trace;
}

RunTrace run(const SmdpModel& model, const RateFunction& f, const RunConfig& cfg) {
  LearnerState st;
  return run(model, f, cfg, st);
}

void write_trace_csv(std::ostream& os, const RunTrace& trace) {
  const bool with_q = std::any_of(trace.checkpoints.begin(), trace.checkpoints.end(),
                                  [](const Checkpoint& c) { return c.q.has_value(); });
  os << "n,f_q,residual_inf,t_err_max";
  if (with_q)
    for (std::size_t i = 0; i < trace.dim; ++i) os << ",q_" << i;
  os << '\n';
  for (const auto& c : trace.checkpoints) {
    os << c.n << ',';
    put(os, c.f_q);
    os << ',';
    put(os, c.residual_inf);
    os << ',';
    put(os, c.t_err_max);
    if (with_q) {
      for (std::size_t i = 0; i < trace.dim; ++i) {
        os << ',';
        if (c.q) put(os, (*c.q)[i]);
      }
    }
    os << '\n';
  }
}

std::string trace_csv(const RunTrace& trace) {
  std::ostringstream os;
  write_trace_csv(os, trace);
  return os.str();
}

RunTrace read_trace_csv(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  if (!std::getline(is, line)) throw InputError("trace CSV is empty");
  const auto header = split(line);
  if (header.size() < 4 || header[0] != "n" || header[1] != "f_q" || header[2] != "residual_inf" ||
      header[3] != "t_err_max")
    throw InputError("trace CSV: unexpected header '" + line + "'");
  RunTrace trace;
  trace.dim = header.size() - 4;
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != header.size())
      throw InputError("trace CSV line " + std::to_string(lineno) + ": expected " +
                       std::to_string(header.size()) + " cells");
    Checkpoint c;
    std::uint64_t n = 0;
    const auto r = std::from_chars(cells[0].data(), cells[0].data() + cells[0].size(), n);
    if (r.ec != std::errc() || r.ptr != cells[0].data() + cells[0].size())
      throw InputError("trace CSV line " + std::to_string(lineno) + ": bad step index");
    c.n = n;
    c.f_q = parse_double(cells[1], lineno);
    c.residual_inf = parse_double(cells[2], lineno);
    c.t_err_max = parse_double(cells[3], lineno);
    if (trace.dim > 0 && !cells[4].empty()) {
      std::vector<double> q(trace.dim);
      for (std::size_t i = 0; i < trace.dim; ++i) q[i] = parse_double(cells[4 + i], lineno);
      c.q = std::move(q);
    }
    if (!trace.checkpoints.empty() && c.n <= trace.checkpoints.back().n)
      throw InputError("trace CSV line " + std::to_string(lineno) + ": n not increasing");
    trace.checkpoints.push_back(std::move(c));
  }
  return trace;
}

ConvergenceReport convergence_detector(const RunTrace& trace, double window_fraction,
                                       double tol_point, double tol_set) {
  if (!(window_fraction > 0.0 && window_fraction <= 1.0))
    throw ParameterError("window_fraction must lie in (0, 1]");
  if (trace.checkpoints.empty()) throw InputError("convergence detector: empty trace");
  const double n_last = static_cast<double>(trace.checkpoints.back().n);
  const double cut = (1.0 - window_fraction) * n_last;

  ConvergenceReport rep;
  std::vector<const std::vector<double>*> snaps;
  for (const auto& c : trace.checkpoints) {
    if (static_cast<double>(c.n) < cut) continue;
    ++rep.window_checkpoints;
    rep.max_residual = std::max(rep.max_residual, c.residual_inf);
    if (std::isnan(c.residual_inf)) rep.max_residual = c.residual_inf;
    if (c.q) snaps.push_back(&*c.q);
  }
  rep.window_snapshots = snaps.size();
  if (snaps.size() < 10)
    throw InputError("convergence detector needs at least 10 Q snapshots in the window, found " +
                     std::to_string(snaps.size()));
  for (std::size_t a = 0; a < snaps.size(); ++a)
    for (std::size_t b = a + 1; b < snaps.size(); ++b)
      rep.max_pairwise = std::max(rep.max_pairwise, sup_distance(*snaps[a], *snaps[b]));

  if (!(rep.max_residual <= tol_set))
    rep.verdict = ConvergenceVerdict::NotConverged;
  else if (rep.max_pairwise <= tol_point)
    rep.verdict = ConvergenceVerdict::ConvergedToPoint;
  else
    rep.verdict = ConvergenceVerdict::ConvergedToSet;
  return rep;
}

const char* to_string(ConvergenceVerdict v) {
  switch (v) {
    case ConvergenceVerdict::ConvergedToPoint:
      return "ConvergedToPoint";
    case ConvergenceVerdict::ConvergedToSet:
      return "ConvergedToSet";
    case ConvergenceVerdict::NotConverged:
      return "NotConverged";
  }
  return "?";
}

}  // namespace smdp
