#include <benchmark/benchmark.h>

#include "smdp/gain_oracle.hpp"
#include "smdp/harness/zoo.hpp"
#include "smdp/operators.hpp"
#include "smdp/rvi.hpp"

namespace {

using namespace smdp;

// Ring of n states, two actions: advance (pays 1, tau 1) or stay (pays 0.5, tau 2).
SmdpModel ring(std::size_t n) {
  std::vector<TransitionLaw> laws;
  for (std::size_t s = 0; s < n; ++s) {
    laws.push_back({{Branch{0.8, (s + 1) % n, holding::Deterministic{1.0}, reward::Deterministic{1.0}},
                     Branch{0.2, s, holding::Deterministic{1.0}, reward::Deterministic{1.0}}}});
    laws.push_back({{Branch{1.0, s, holding::Exponential{0.5}, reward::Gaussian{0.5, 1.0}}}});
  }
  return SmdpModel(n, 2, std::move(laws));
}

void BM_OperatorT(benchmark::State& state) {
  const auto m = ring(static_cast<std::size_t>(state.range(0)));
  std::vector<double> q(m.num_pairs(), 0.25);
  for (auto _ : state) benchmark::DoNotOptimize(operator_T(m, q, m.t_min()));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(m.num_pairs()));
}
BENCHMARK(BM_OperatorT)->Arg(4)->Arg(16)->Arg(64);

void BM_ClassicalRvi(benchmark::State& state) {
  const auto m = ring(static_cast<std::size_t>(state.range(0)));
  const auto f = RateFunction::mean(m.num_pairs());
  for (auto _ : state) {
    auto sol = classical_rvi(m, f, QTable(m.num_states(), m.num_actions()));
    benchmark::DoNotOptimize(sol.rstar);
  }
}
BENCHMARK(BM_ClassicalRvi)->Arg(4)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_GainOracle(benchmark::State& state) {
  const auto m = ring(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(gain_oracle(m).rstar);
  state.SetItemsProcessed(state.iterations() << state.range(0));
}
BENCHMARK(BM_GainOracle)->DenseRange(4, 12, 4)->Unit(benchmark::kMillisecond);

}  // namespace
