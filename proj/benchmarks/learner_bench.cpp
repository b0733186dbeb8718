#include <benchmark/benchmark.h>

#include "smdp/harness/zoo.hpp"
#include "smdp/learner.hpp"

namespace {

using namespace smdp;

void run_steps(benchmark::State& state, const char* model, AsyncScheduler sched) {
  const auto m = harness::zoo_entry(model).model;
  const auto f = RateFunction::mean(m.num_pairs());
  LearnerConfig cfg;
  cfg.scheduler = std::move(sched);
  auto st = make_learner_state(m, 7);
  for (auto _ : state) benchmark::DoNotOptimize(learner_step(m, f, cfg, st).f_value);
  state.SetItemsProcessed(state.iterations());
}

void BM_LearnerStepChain(benchmark::State& state) { run_steps(state, "smdp-exp", AsyncScheduler::uniform_chain(6)); }
BENCHMARK(BM_LearnerStepChain);

void BM_LearnerStepSynchronous(benchmark::State& state) {
  run_steps(state, "smdp-exp", AsyncScheduler::synchronous(6));
}
BENCHMARK(BM_LearnerStepSynchronous);

}  // namespace
