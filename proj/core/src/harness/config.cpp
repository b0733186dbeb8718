#include "smdp/harness/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "../json_support.hpp"
#include "smdp/harness/zoo.hpp"
#include "smdp/model_io.hpp"

namespace smdp::harness {

using detail::json;

ConfigError::ConfigError(std::vector<std::string> errors)
    : InputError([&] {
        std::string msg = "invalid experiment config:";
        for (const auto& e : errors) msg += "\n  " + e;
        return msg;
      }()),
      errors_(std::move(errors)) {}

namespace {

json schedule_to_json(const StepSchedule& s) {
  switch (s.kind()) {
    case ScheduleKind::Class1:
      return {{"kind", "class1"}, {"params", {{"A", s.scale()}}}};
    case ScheduleKind::Class2:
      return {{"kind", "class2"}, {"params", {{"A", s.scale()}}}};
    case ScheduleKind::PowerLaw:
      return {{"kind", "power_law"}, {"params", {{"B", s.scale()}, {"b", s.exponent()}}}};
    case ScheduleKind::ScaledCopy:
      return {{"kind", "scaled"},
              {"params", {{"factor", s.scale()}, {"base", schedule_to_json(s.base())}}}};
  }
  return {};
}

StepSchedule schedule_from_json(const json& j) {
  const std::string ctx = "schedule";
  const std::string kind = detail::text(j, "kind", ctx);
  const json& p = detail::require(j, "params", ctx);
  if (kind == "class1") return StepSchedule::class1(detail::number(p, "A", ctx));
  if (kind == "class2") return StepSchedule::class2(detail::number(p, "A", ctx));
  if (kind == "power_law")
    return StepSchedule::power_law(detail::number(p, "B", ctx), detail::number(p, "b", ctx));
  if (kind == "scaled")
    return StepSchedule::scaled(schedule_from_json(detail::require(p, "base", ctx)),
                                detail::number(p, "factor", ctx));
  throw InputError("unknown schedule kind '" + kind + "'");
}

json scheduler_to_json(const AsyncScheduler& s) {
  switch (s.kind()) {
    case SchedulerKind::Synchronous:
      return {{"kind", "synchronous"}};
    case SchedulerKind::RoundRobin:
      return {{"kind", "round_robin"}};
    case SchedulerKind::UniformRandom:
      return {{"kind", "uniform_random"}, {"params", {{"k", s.k()}}}};
    case SchedulerKind::MarkovChain:
      return {{"kind", "markov_chain"}, {"params", {{"matrix", s.matrix()}, {"start", s.start()}}}};
  }
  return {};
}

AsyncScheduler scheduler_from_json(const json& j, std::size_t dim) {
  const std::string ctx = "scheduler";
  const std::string kind = detail::text(j, "kind", ctx);
  const json empty = json::object();
  const json& p = j.contains("params") ? j.at("params") : empty;
  if (kind == "synchronous") return AsyncScheduler::synchronous(dim);
  if (kind == "round_robin") return AsyncScheduler::round_robin(dim);
  if (kind == "uniform_random") return AsyncScheduler::uniform_random(dim, detail::index(p, "k", ctx));
  if (kind == "markov_chain") {
    if (!p.contains("matrix")) return AsyncScheduler::uniform_chain(dim);
    auto m = p.at("matrix").get<std::vector<std::vector<double>>>();
    if (m.size() != dim)
      throw InputError("scheduler matrix has " + std::to_string(m.size()) +
                       " rows, the model has " + std::to_string(dim) + " pairs");
    return AsyncScheduler::markov_chain(std::move(m), p.value("start", std::size_t{0}));
  }
  throw InputError("unknown scheduler kind '" + kind + "'");
}

// Fills a missing "dim" in rate-function specs that need one.
void default_dims(json& j, std::size_t dim) {
  if (!j.is_object()) return;
  const std::string kind = j.value("kind", "");
  if (kind == "mean" || kind == "max" || kind == "min") {
    if (!j.contains("params")) j["params"] = json::object();
    if (!j["params"].contains("dim")) j["params"]["dim"] = dim;
  }
  if (j.contains("children") && j["children"].is_array())
    for (auto& c : j["children"]) default_dims(c, dim);
}

json canonical(const ExperimentConfig& c, bool for_hash) {
  json j;
  j["model"] = detail::model_to_json(c.model);
  if (!for_hash && !c.model_name.empty()) j["model_name"] = c.model_name;
  j["f"] = detail::rate_function_to_json(c.f);
  if (c.alpha.kind() == ScheduleKind::Class1 || c.alpha.kind() == ScheduleKind::Class2)
    j["alpha"] = {{"class", c.alpha.kind() == ScheduleKind::Class1 ? 1 : 2}, {"A", c.alpha.scale()}};
  else
    j["alpha"] = schedule_to_json(c.alpha);
  if (c.beta_scaled_alpha)
    j["beta"] = {{"kind", "scaled_alpha"}, {"params", {{"factor", c.beta.scale()}}}};
  else
    j["beta"] = schedule_to_json(c.beta);
  if (c.eta_constant)
    j["eta"] = {{"kind", "constant"}, {"value", *c.eta_constant}};
  else
    j["eta"] = {{"kind", "log"}};
  j["scheduler"] = scheduler_to_json(c.scheduler);
  j["gauss_seidel"] = c.gauss_seidel;
  j["sigma"] = c.sigma;
  j["gamma"] = c.gamma;
  j["t_min_lower_bound"] = c.t_min_lower_bound;
  j["lipschitz_bound"] = c.lipschitz_bound;
  j["override"] = c.override_validation;
  j["iters"] = c.iters;
  j["checkpoint_every"] = c.checkpoint_every;
  j["snapshot_every"] = c.snapshot_every;
  j["seeds"] = c.seeds;
  if (c.q0) j["q0"] = *c.q0;
  if (c.t0) j["t0"] = *c.t0;
  if (!for_hash && !c.output_dir.empty()) j["output_dir"] = c.output_dir;
  j["rvi"] = {{"alpha_bar", c.rvi.alpha_bar}, {"max_iters", c.rvi.max_iters}, {"tol", c.rvi.tol}};
  j["ode"] = {{"t_end", c.ode.t_end},
              {"dt", c.ode.dt},
              {"starts", c.ode.starts},
              {"t_end_infinity", c.ode.t_end_infinity},
              {"starts_infinity", c.ode.starts_infinity}};
  json sched = json::array();
  for (const auto& s : c.sweep.schedulers) sched.push_back(scheduler_to_json(s));
  j["sweep"] = {{"A", c.sweep.A}, {"sigma", c.sweep.sigma}, {"schedulers", sched}};
  return j;
}

}  // namespace

ExperimentConfig parse_experiment_config(const std::string& text,
                                         const std::filesystem::path& base_dir) {
  const json doc = detail::parse(text, "experiment config");
  if (!doc.is_object()) throw ConfigError({"top level must be a JSON object"});

  static const std::set<std::string> known = {
      "model", "model_name", "f", "alpha", "beta", "eta", "scheduler", "gauss_seidel",
      "sigma", "gamma", "t_min_lower_bound", "lipschitz_bound", "override", "iters",
      "checkpoint_every", "snapshot_every", "seeds", "q0", "t0", "output_dir", "rvi", "ode",
      "sweep"};
  std::vector<std::string> errors;
  for (const auto& [key, _] : doc.items())
    if (!known.count(key)) errors.push_back("unknown field '" + key + "'");

  // Each field is parsed independently so every problem is reported at once.
  auto field = [&](const char* name, auto&& fn) {
    try {
      fn();
    } catch (const json::exception& e) {
      errors.push_back(std::string(name) + ": " + e.what());
    } catch (const std::exception& e) {
      errors.push_back(std::string(name) + ": " + e.what());
    }
  };

  ExperimentConfig c;
  bool have_model = false;
  field("model", [&] {
    if (!doc.contains("model")) throw InputError("missing (zoo name, file path or inline object)");
    const json& m = doc.at("model");
    if (m.is_string()) {
      const std::string ref = m.get<std::string>();
      if (is_zoo_name(ref)) {
        c.model = zoo_entry(ref).model;
        c.model_name = ref;
      } else {
        c.model = load_model_file((base_dir / ref).string());
      }
    } else {
      c.model = detail::model_from_json(m);
    }
    have_model = true;
  });
  field("model_name", [&] {
    if (doc.contains("model_name")) c.model_name = doc.at("model_name").get<std::string>();
  });
  if (!have_model) throw ConfigError(errors);
  const std::size_t d = c.model.num_pairs();

  field("f", [&] {
    json fj = doc.contains("f") ? doc.at("f") : json{{"kind", "mean"}};
    default_dims(fj, d);
    c.f = detail::rate_function_from_json(fj, &c.model);
    if (c.f.dim() != d)
      throw InputError("dimension " + std::to_string(c.f.dim()) + " does not match the model's " +
                       std::to_string(d) + " pairs");
  });
  field("alpha", [&] {
    if (!doc.contains("alpha")) return;
    const json& a = doc.at("alpha");
    if (a.contains("kind")) {
      c.alpha = schedule_from_json(a);
      return;
    }
    const auto cls = detail::index(a, "class", "alpha");
    const double A = detail::number(a, "A", "alpha");
    if (cls == 1)
      c.alpha = StepSchedule::class1(A);
    else if (cls == 2)
      c.alpha = StepSchedule::class2(A);
    else
      throw InputError("class must be 1 or 2");
  });
  field("sigma", [&] {
    c.sigma = doc.contains("sigma") ? doc.at("sigma").get<double>() : c.alpha.scale();
  });
  field("beta", [&] {
    const json b = doc.contains("beta") ? doc.at("beta") : json{{"kind", "scaled_alpha"}};
    if (detail::text(b, "kind", "beta") == "scaled_alpha") {
      double factor = c.sigma;
      if (b.contains("params") && b.at("params").contains("factor"))
        factor = detail::number(b.at("params"), "factor", "beta");
      c.beta = StepSchedule::scaled(c.alpha, factor);
      c.beta_scaled_alpha = true;
    } else {
      c.beta = schedule_from_json(b);
      c.beta_scaled_alpha = false;
    }
  });
  field("eta", [&] {
    if (!doc.contains("eta")) return;
    const json& e = doc.at("eta");
    const std::string kind = detail::text(e, "kind", "eta");
    if (kind == "constant") {
      const double v = detail::number(e, "value", "eta");
      if (!(v > 0.0)) throw InputError("constant floor must be positive");
      c.eta_constant = v;
    } else if (kind != "log") {
      throw InputError("kind must be 'log' or 'constant'");
    }
  });
  field("scheduler", [&] {
    c.scheduler = doc.contains("scheduler") ? scheduler_from_json(doc.at("scheduler"), d)
                                            : AsyncScheduler::uniform_chain(d);
  });
  field("gauss_seidel", [&] { c.gauss_seidel = doc.value("gauss_seidel", false); });
  field("gamma", [&] { c.gamma = doc.value("gamma", 0.49); });
  field("t_min_lower_bound", [&] {
    c.t_min_lower_bound = doc.value("t_min_lower_bound", c.model.t_min());
    if (!(c.t_min_lower_bound > 0.0) || c.t_min_lower_bound > c.model.t_min())
      throw InputError("must lie in (0, t_min = " + std::to_string(c.model.t_min()) + "]");
  });
  field("lipschitz_bound", [&] {
    c.lipschitz_bound = doc.value("lipschitz_bound", c.f.lipschitz_bound());
    if (!(c.lipschitz_bound >= 0.0)) throw InputError("must be nonnegative");
  });
  field("override", [&] { c.override_validation = doc.value("override", false); });
  auto count = [&](const char* key, std::uint64_t fallback) -> std::uint64_t {
    return doc.contains(key) ? detail::index(doc, key, key) : fallback;
  };
  field("iters", [&] { c.iters = count("iters", c.iters); });
  field("checkpoint_every", [&] {
    c.checkpoint_every = count("checkpoint_every", c.checkpoint_every);
    if (c.checkpoint_every == 0) throw InputError("must be positive");
  });
  field("snapshot_every", [&] { c.snapshot_every = count("snapshot_every", c.snapshot_every); });
  field("seeds", [&] {
    if (!doc.contains("seeds")) return;
    const json& list = doc.at("seeds");
    if (!list.is_array()) throw InputError("must be a list of nonnegative integers");
    c.seeds.clear();
    for (const json& v : list) {
      if (!v.is_number_unsigned()) throw InputError("must be a list of nonnegative integers");
      c.seeds.push_back(v.get<std::uint64_t>());
    }
    if (c.seeds.empty()) throw InputError("need at least one seed");
  });
  auto table = [&](const char* key, std::optional<std::vector<double>>& out) {
    field(key, [&] {
      if (!doc.contains(key)) return;
      auto v = doc.at(key).get<std::vector<double>>();
      if (v.size() != d) throw InputError("expected " + std::to_string(d) + " entries");
      out = std::move(v);
    });
  };
  table("q0", c.q0);
  table("t0", c.t0);
  field("output_dir", [&] { c.output_dir = doc.value("output_dir", std::string{}); });
  field("rvi", [&] {
    if (!doc.contains("rvi")) return;
    const json& r = doc.at("rvi");
    c.rvi.alpha_bar = r.value("alpha_bar", c.rvi.alpha_bar);
    c.rvi.max_iters = r.value("max_iters", c.rvi.max_iters);
    c.rvi.tol = r.value("tol", c.rvi.tol);
  });
  field("ode", [&] {
    if (!doc.contains("ode")) return;
    const json& o = doc.at("ode");
    c.ode.t_end = o.value("t_end", c.ode.t_end);
    c.ode.dt = o.value("dt", c.ode.dt);
    c.ode.starts = o.value("starts", c.ode.starts);
    c.ode.t_end_infinity = o.value("t_end_infinity", c.ode.t_end_infinity);
    c.ode.starts_infinity = o.value("starts_infinity", c.ode.starts_infinity);
  });
  field("sweep", [&] {
    if (!doc.contains("sweep")) return;
    const json& s = doc.at("sweep");
    c.sweep.A = s.value("A", std::vector<double>{});
    c.sweep.sigma = s.value("sigma", std::vector<double>{});
    if (s.contains("schedulers"))
      for (const auto& sj : s.at("schedulers")) c.sweep.schedulers.push_back(scheduler_from_json(sj, d));
  });

  if (!errors.empty()) throw ConfigError(std::move(errors));
  return c;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_experiment_config(ss.str(), path.parent_path());
}

std::string serialize_experiment_config(const ExperimentConfig& cfg, int indent) {
  return canonical(cfg, false).dump(indent);
}

std::string config_hash(const ExperimentConfig& cfg) {
  const std::string s = canonical(cfg, true).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  static const char* hex = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i, h >>= 4) out[static_cast<std::size_t>(i)] = hex[h & 0xf];
  return out;
}

ParamThresholds thresholds_of(const ExperimentConfig& cfg) {
  return make_thresholds(cfg.t_min_lower_bound, cfg.lipschitz_bound, cfg.sigma, cfg.gamma);
}

UpdateMode mode_of(const ExperimentConfig& cfg) {
  return cfg.scheduler.kind() == SchedulerKind::Synchronous ? UpdateMode::Synchronous
                                                            : UpdateMode::Asynchronous;
}

RunConfig to_run_config(const ExperimentConfig& cfg, std::uint64_t seed) {
  RunConfig rc;
  rc.learner.alpha = cfg.alpha;
  rc.learner.beta = cfg.beta;
  rc.learner.scheduler = cfg.scheduler;
  rc.learner.gauss_seidel = cfg.gauss_seidel;
  rc.learner.eta_constant = cfg.eta_constant;
  rc.thresholds = thresholds_of(cfg);
  rc.mode = mode_of(cfg);
  rc.override_validation = cfg.override_validation;
  rc.iters = cfg.iters;
  rc.checkpoint_every = cfg.checkpoint_every;
  rc.snapshot_every = cfg.snapshot_every;
  rc.seed = seed;
  const std::size_t na = cfg.model.num_actions();
  if (cfg.q0) rc.q0 = QTable(na, *cfg.q0);
  if (cfg.t0) rc.t0 = QTable(na, *cfg.t0);
  rc.config_hash = config_hash(cfg);
  return rc;
}

}  // namespace smdp::harness
