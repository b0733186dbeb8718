#include "smdp/harness/cli.hpp"

#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>

#include "smdp/error.hpp"
#include "smdp/gain_oracle.hpp"
#include "smdp/harness/acceptance.hpp"
#include "smdp/harness/config.hpp"
#include "smdp/harness/experiment.hpp"
#include "smdp/harness/zoo.hpp"
#include "smdp/model_io.hpp"
#include "smdp/trace.hpp"

namespace smdp::harness {

namespace {

constexpr int kOk = 0;
constexpr int kValidation = 1;
constexpr int kRuntime = 2;

struct Globals {
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> iters;
  std::string out;
  bool quiet = false;
  std::size_t jobs = 0;
  std::string format = "text";
};

SmdpModel resolve_model(const std::string& ref) {
  if (is_zoo_name(ref)) return zoo_entry(ref).model;
  return load_model_file(ref);
}

std::optional<std::filesystem::path> out_dir(const Globals& g, const ExperimentConfig* cfg) {
  if (!g.out.empty()) return std::filesystem::path(g.out);
  if (cfg && !cfg->output_dir.empty()) return std::filesystem::path(cfg->output_dir);
  if (const char* env = std::getenv("SMDP_LAB_OUT"); env && *env) return std::filesystem::path(env);
  return std::nullopt;
}

ExperimentConfig load_config(const std::string& path, const Globals& g) {
  auto cfg = load_experiment_config(path);
  if (g.seed) cfg.seeds = {*g.seed};
  if (g.iters) cfg.iters = *g.iters;
  return cfg;
}

}  // namespace

int cli_main(int argc, char** argv) {
  CLI::App app{"smdp-lab: average-reward SMDP solvers and RVI Q-learning experiments"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--seed", g.seed, "Run a single seed instead of the config's list");
  app.add_option("--iters", g.iters, "Override the number of learner iterations");
  app.add_option("--out", g.out, "Output directory (default: config output_dir, then $SMDP_LAB_OUT)");
  app.add_flag("--quiet", g.quiet, "Print only the final status line");
  app.add_option("--jobs", g.jobs, "Parallel runs (0 = all cores)");
  app.add_option("--format", g.format, "Report format")->check(CLI::IsMember({"text", "json", "csv"}));

  std::string target;
  auto* model_check_cmd = app.add_subcommand("model-check", "Check holding-time assumptions and weak communication");
  model_check_cmd->add_option("model", target, "Zoo name or model JSON file")->required();
  auto* oracle_cmd = app.add_subcommand("oracle", "Optimal reward rate by policy enumeration");
  oracle_cmd->add_option("model", target, "Zoo name or model JSON file")->required();
  auto* rvi_cmd = app.add_subcommand("solve-rvi", "Classical relative value iteration");
  rvi_cmd->add_option("config", target, "Experiment config JSON")->required();
  auto* learn_cmd = app.add_subcommand("learn", "Asynchronous RVI Q-learning across seeds");
  learn_cmd->add_option("config", target, "Experiment config JSON")->required();
  auto* ode_cmd = app.add_subcommand("ode-check", "Mean-field ODE property battery");
  ode_cmd->add_option("config", target, "Experiment config JSON")->required();
  auto* sweep_cmd = app.add_subcommand("sweep", "Grid over A, sigma and scheduler");
  sweep_cmd->add_option("config", target, "Experiment config JSON")->required();
  auto* accept_cmd = app.add_subcommand("accept", "Run the acceptance suite");
  std::vector<int> only;
  std::vector<std::uint64_t> accept_seeds;
  accept_cmd->add_option("--only", only, "Criterion ids to run");
  accept_cmd->add_option("--seeds", accept_seeds, "Master seed list (default 7 8 9 10 11)");
  auto* zoo_cmd = app.add_subcommand("zoo", "List built-in models, optionally exporting them as JSON");
  std::string export_dir;
  zoo_cmd->add_option("--export", export_dir, "Directory to write <name>.json files into");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    std::cout << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return kValidation;
  }

  const bool as_json = g.format == "json";
  try {
    if (*model_check_cmd) {
      const auto model = resolve_model(target);
      const auto rep = model_check(model);
      if (!g.quiet || !rep.ok()) std::cout << format_model_check(model, rep, as_json);
      return rep.ok() ? kOk : kValidation;
    }
    if (*oracle_cmd) {
      const auto model = resolve_model(target);
      std::cout << format_oracle(model, gain_oracle(model), as_json);
      return kOk;
    }
    if (*rvi_cmd) {
      const auto cfg = load_config(target, g);
      const auto rep = solve_rvi(cfg, out_dir(g, &cfg));
      if (!g.quiet) std::cout << format_rvi(rep, as_json);
      return kOk;
    }
    if (*learn_cmd) {
      const auto cfg = load_config(target, g);
      const auto rep = learn(cfg, {g.jobs, out_dir(g, &cfg)});
      if (!g.quiet) std::cout << format_learn(rep, as_json);
      for (const auto& s : rep.seeds)
        if (s.error) return kRuntime;
      return kOk;
    }
    if (*ode_cmd) {
      const auto cfg = load_config(target, g);
      const auto rep = ode_check(cfg.model, cfg.f, cfg.ode, cfg.seeds.front());
      if (!g.quiet || !rep.ok()) std::cout << format_ode_check(rep, as_json);
      return rep.ok() ? kOk : kValidation;
    }
    if (*sweep_cmd) {
      const auto cfg = load_config(target, g);
      const auto cells = sweep(cfg, {g.jobs, out_dir(g, &cfg)});
      if (!g.quiet) std::cout << format_sweep(cells, as_json);
      return kOk;
    }
    if (*accept_cmd) {
      AcceptanceOptions opts;
      opts.only = only;
      opts.jobs = g.jobs;
      if (!accept_seeds.empty()) opts.seeds = accept_seeds;
      if (!g.quiet) opts.on_result = [](const CriterionResult& r) { std::cout << format_criterion(r) << std::endl; };
      const auto results = run_acceptance(opts);
      std::size_t passed = 0;
      for (const auto& r : results) passed += r.passed;
      std::cout << passed << "/" << results.size() << " criteria passed\n";
      return passed == results.size() ? kOk : kValidation;
    }
    if (*zoo_cmd) {
      for (const auto& e : model_zoo()) {
        if (!g.quiet)
          std::cout << e.name << ": " << e.description << " (t_min " << e.t_min
                    << (e.weakly_communicating ? ", r* " + std::to_string(e.rstar) : ", not weakly communicating")
                    << ")\n";
        if (!export_dir.empty()) {
          std::filesystem::create_directories(export_dir);
          std::ofstream(std::filesystem::path(export_dir) / (e.name + ".json"))
              << serialize_model_json(e.model) << "\n";
        }
      }
      return kOk;
    }
  } catch (const ValidationFailure& e) {
    std::cerr << e.what() << "\n";
    return kValidation;
  } catch (const ConfigError& e) {
    std::cerr << e.what() << "\n";
    return kValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kRuntime;
  }
  return kValidation;
}

}  // namespace smdp::harness
