#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <functional>

#include <unistd.h>

#include "smdp/communication.hpp"
#include "smdp/gain_oracle.hpp"
#include "smdp/harness/cli.hpp"
#include "smdp/harness/config.hpp"
#include "smdp/harness/zoo.hpp"
#include "smdp/model_io.hpp"
#include "smdp/rvi.hpp"

namespace smdp::harness {
namespace {

namespace fs = std::filesystem;

class TempDir {
 public:
  TempDir() : path_(fs::temp_directory_path() / ("smdp_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter_++))) {
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }
  fs::path write(const std::string& name, const std::string& text) const {
    std::ofstream(path_ / name) << text;
    return path_ / name;
  }

 private:
  static inline int counter_ = 0;
  fs::path path_;
};

int cli(std::vector<std::string> args) {
  args.insert(args.begin(), "smdp-lab");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  return cli_main(static_cast<int>(argv.size()), argv.data());
}

TEST(Zoo, Certificates) {
  const auto zoo = model_zoo();
  ASSERT_GE(zoo.size(), 5u);
  for (const auto& e : zoo) {
    EXPECT_EQ(is_weakly_communicating(classify_communication(e.model)), e.weakly_communicating) << e.name;
    EXPECT_DOUBLE_EQ(e.model.t_min(), e.t_min) << e.name;
    if (e.weakly_communicating) EXPECT_NEAR(gain_oracle(e.model).rstar, e.rstar, 1e-12) << e.name;
    EXPECT_TRUE(is_zoo_name(e.name));
  }
  EXPECT_EQ(zoo_entry("unit1").rstar, 3.0);
  EXPECT_EQ(zoo_entry("wc3").rstar, 1.0);
  EXPECT_EQ(zoo_entry("smdp-exp").t_min, 0.5);
  EXPECT_THROW(zoo_entry("nope"), InputError);
  const auto zero = zoo_entry("wc3-zero");
  EXPECT_EQ(zero.rstar, 0.0);
  const auto s = classical_rvi(zero.model, RateFunction::mean(6), QTable(3, 2, 1.0));
  for (std::size_t i = 0; i < 6; ++i) EXPECT_NEAR(s.q[i], s.q[0], 1e-8);
}

TEST(Config, DefaultsFromZoo) {
  const auto c = parse_experiment_config(R"({"model": "wc3", "alpha": {"class": 2, "A": 4}})", ".");
  EXPECT_EQ(c.model_name, "wc3");
  EXPECT_EQ(c.model.num_pairs(), 6u);
  EXPECT_EQ(c.f.dim(), 6u);
  EXPECT_EQ(c.alpha, StepSchedule::class2(4));
  EXPECT_EQ(c.sigma, 4.0);
  EXPECT_EQ(c.scheduler.kind(), SchedulerKind::MarkovChain);
  const auto th = thresholds_of(c);
  EXPECT_DOUBLE_EQ(th.a_star(), 3.0);
}

TEST(Config, HashIsStableAcrossRoundTrip) {
  const std::string text = R"({"model": "smdp-exp", "alpha": {"class": 2, "A": 6},
      "beta": {"kind": "scaled_alpha", "params": {"factor": 6}}, "sigma": 6,
      "f": {"kind": "max", "params": {"b": 0.5, "beta": 1, "subset": [0, 2]}},
      "scheduler": {"kind": "uniform_random", "params": {"k": 2}}, "seeds": [1, 2, 3],
      "iters": 1000, "output_dir": "elsewhere"})";
  const auto c = parse_experiment_config(text, ".");
  const auto again = parse_experiment_config(serialize_experiment_config(c), ".");
  EXPECT_EQ(config_hash(c), config_hash(again));
  EXPECT_EQ(serialize_experiment_config(c), serialize_experiment_config(again));
  EXPECT_EQ(config_hash(c).size(), 16u);

  auto moved = c;
  moved.output_dir = "other";
  EXPECT_EQ(config_hash(moved), config_hash(c));
  for (auto change : std::vector<std::function<void(ExperimentConfig&)>>{
           [](ExperimentConfig& x) { x.iters += 1; },
           [](ExperimentConfig& x) { x.seeds.push_back(9); },
           [](ExperimentConfig& x) { x.gamma = 0.3; },
           [](ExperimentConfig& x) { x.alpha = StepSchedule::class2(7); },
           [](ExperimentConfig& x) { x.gauss_seidel = true; },
           [](ExperimentConfig& x) { x.f = RateFunction::mean(6); },
           [](ExperimentConfig& x) { x.model = zoo_entry("wc3").model; },
       }) {
    auto d = c;
    change(d);
    EXPECT_NE(config_hash(d), config_hash(c));
  }
}

TEST(Config, ReportsEveryBadField) {
  try {
    parse_experiment_config(R"({"model": "wc3", "alpha": {"class": 3, "A": 4}, "iters": -5,
                                "scheduler": {"kind": "sideways"}, "bogus": 1})",
                            ".");
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_GE(e.errors().size(), 4u);
    std::string all;
    for (const auto& m : e.errors()) all += m + "\n";
    for (const char* field : {"alpha", "iters", "scheduler", "bogus"}) EXPECT_NE(all.find(field), std::string::npos) << all;
  }
  EXPECT_THROW(parse_experiment_config("not json", "."), InputError);
  EXPECT_THROW(parse_experiment_config(R"({"alpha": {"class": 2, "A": 4}})", "."), ConfigError);
}

TEST(Config, ModelFromFile) {
  TempDir dir;
  dir.write("m.json", serialize_model_json(zoo_entry("cycle2").model));
  const auto c = parse_experiment_config(R"({"model": "m.json"})", dir.path());
  EXPECT_EQ(c.model.num_states(), 2u);
  EXPECT_TRUE(c.model_name.empty());
}

TEST(Cli, ExitCodes) {
  TempDir dir;
  const auto split = dir.write("split.json", serialize_model_json(zoo_entry("split2").model));
  EXPECT_EQ(cli({"model-check", split.string(), "--quiet"}), 1);
  EXPECT_EQ(cli({"model-check", "wc3", "--quiet"}), 0);
  EXPECT_EQ(cli({"oracle", "wc3", "--quiet"}), 0);
  const auto bad = dir.write("bad.json", R"({"model": "wc3", "alpha": {"class": 1, "A": 5}, "gamma": 0.4,
                                            "iters": 1000})");
  EXPECT_EQ(cli({"learn", bad.string(), "--out", (dir.path() / "out").string(), "--quiet"}), 1);
  EXPECT_FALSE(fs::exists(dir.path() / "out" / "trace_seed7.csv"));
  EXPECT_EQ(cli({"frobnicate"}), 1);
  EXPECT_EQ(cli({"learn", "--no-such-flag", bad.string()}), 1);
  EXPECT_EQ(cli({"learn", (dir.path() / "missing.json").string(), "--quiet"}), 2);
  EXPECT_EQ(cli({"--help"}), 0);
}

TEST(Cli, LearnWritesArtifacts) {
  TempDir dir;
  const auto cfg = dir.write("ok.json", R"({"model": "wc3", "alpha": {"class": 2, "A": 4}, "iters": 5000,
                                           "snapshot_every": 1000, "seeds": [1, 2]})");
  const auto out = dir.path() / "out";
  ASSERT_EQ(cli({"learn", cfg.string(), "--out", out.string(), "--quiet", "--jobs", "1"}), 0);
  for (const char* f : {"trace_seed1.csv", "trace_seed2.csv", "config.json", "summary.json"})
    EXPECT_TRUE(fs::exists(out / f)) << f;
  ASSERT_EQ(cli({"solve-rvi", cfg.string(), "--out", (dir.path() / "rvi").string(), "--quiet"}), 0);
  EXPECT_TRUE(fs::exists(dir.path() / "rvi" / "solution.json"));
  EXPECT_TRUE(fs::exists(dir.path() / "rvi" / "residuals.csv"));
}

}  // namespace
}  // namespace smdp::harness
