#include <gtest/gtest.h>

#include <cmath>

#include "generators.hpp"
#include "smdp/error.hpp"
#include "smdp/model.hpp"
#include "smdp/model_io.hpp"

namespace smdp {
namespace {

TransitionLaw det(StateId next, double tau, double r) {
  return {{Branch{1.0, next, holding::Deterministic{tau}, reward::Deterministic{r}}}};
}

TEST(Distributions, RejectsDegenerateHolding) {
  HoldingTimeDist zero_t = holding::Deterministic{0.0};
  EXPECT_THROW(validate(zero_t), ModelError);
  HoldingTimeDist bad_rate = holding::Exponential{-1.0};
  EXPECT_THROW(validate(bad_rate), ModelError);
  HoldingTimeDist all_zero = holding::Discrete{{{0.4, 0.0}, {0.6, 0.0}}};
  EXPECT_THROW(validate(all_zero), ModelError);
  HoldingTimeDist bad_sum = holding::Discrete{{{0.4, 1.0}, {0.4, 2.0}}};
  EXPECT_THROW(validate(bad_sum), ModelError);
  RewardDist neg_sd = reward::Gaussian{0.0, -1.0};
  EXPECT_THROW(validate(neg_sd), ModelError);
}

TEST(Distributions, RenormalisesWithinTolerance) {
  HoldingTimeDist d = holding::Discrete{{{0.5 + 4e-13, 1.0}, {0.5, 3.0}}};
  validate(d);
  const auto& atoms = std::get<holding::Discrete>(d).atoms;
  EXPECT_LT(atoms[0].prob, 0.5 + 4e-13);
  EXPECT_NEAR(atoms[0].prob + atoms[1].prob, 1.0, 1e-15);
}

TEST(Distributions, ClosedFormMoments) {
  EXPECT_DOUBLE_EQ(mean(HoldingTimeDist{holding::Exponential{2.0}}), 0.5);
  EXPECT_DOUBLE_EQ(second_moment(HoldingTimeDist{holding::Exponential{2.0}}), 0.5);
  EXPECT_DOUBLE_EQ(mean(RewardDist{reward::Gaussian{-1.0, 5.0}}), -1.0);
  EXPECT_DOUBLE_EQ(second_moment(RewardDist{reward::Gaussian{-1.0, 5.0}}), 26.0);
  EXPECT_DOUBLE_EQ(mean(HoldingTimeDist{holding::Discrete{{{0.5, 1.0}, {0.5, 3.0}}}}), 2.0);
}

TEST(Model, ExpectationExamples) {
  const SmdpModel zero(2, 2, {det(0, 1, 0), det(1, 1, 0), det(1, 1, 0), det(0, 1, 0)});
  for (std::size_t i = 0; i < zero.num_pairs(); ++i) {
    EXPECT_EQ(zero.expected_holding(i), 1.0);
    EXPECT_EQ(zero.expected_reward(i), 0.0);
  }
  const SmdpModel mix(1, 1, {{{Branch{0.5, 0, holding::Deterministic{1.0}, reward::Gaussian{-1.0, 5.0}},
                                Branch{0.5, 0, holding::Deterministic{3.0}, reward::Gaussian{-1.0, 5.0}}}}});
  EXPECT_DOUBLE_EQ(mix.expected_holding(0), 2.0);
  EXPECT_DOUBLE_EQ(mix.expected_reward(0), -1.0);
  EXPECT_DOUBLE_EQ(mix.expectations().p[0][0], 1.0);
}

TEST(Model, RejectsStructuralErrors) {
  EXPECT_THROW(SmdpModel(2, 1, {det(0, 1, 0)}), ModelError);
  EXPECT_THROW(SmdpModel(1, 1, {det(3, 1, 0)}), ModelError);
  EXPECT_THROW(SmdpModel(1, 1, {{{Branch{0.7, 0, holding::Deterministic{1.0}, reward::Deterministic{0}}}}}),
               ModelError);
  EXPECT_THROW(SmdpModel(1, 1, {TransitionLaw{}}), ModelError);
}

TEST(Model, SampleDegenerateLaw) {
  const SmdpModel m(1, 1, {det(0, 2.0, 3.0)});
  for (std::uint64_t seed : {0ull, 1ull, 99ull}) {
    SeededRng rng(seed);
    const auto x = sample_transition(m, 0, 0, rng);
    EXPECT_EQ(x.next, 0u);
    EXPECT_EQ(x.tau, 2.0);
    EXPECT_EQ(x.reward, 3.0);
  }
  SeededRng rng(1);
  EXPECT_THROW(sample_transition(m, 1, 0, rng), DomainError);
  EXPECT_THROW(sample_transition(m, 0, 1, rng), DomainError);
}

TEST(Model, BranchFrequencyMonteCarlo) {
  const SmdpModel m(2, 1, {{{Branch{0.5, 0, holding::Deterministic{1}, reward::Deterministic{0}},
                             Branch{0.5, 1, holding::Deterministic{1}, reward::Deterministic{0}}}},
                           det(0, 1, 0)});
  SeededRng rng(42);
  const int n = 1'000'000;
  int hits = 0;
  for (int k = 0; k < n; ++k) hits += sample_transition(m, 0, 0, rng).next == 0 ? 1 : 0;
  EXPECT_NEAR(static_cast<double>(hits) / n, 0.5, 0.002);
}

TEST(Model, ExponentialMeanMonteCarlo) {
  const SmdpModel m(1, 1, {{{Branch{1.0, 0, holding::Exponential{2.0}, reward::Deterministic{0}}}}});
  SeededRng rng(42);
  const int n = 1'000'000;
  double sum = 0.0;
  for (int k = 0; k < n; ++k) sum += sample_transition(m, 0, 0, rng).tau;
  EXPECT_NEAR(sum / n, 0.5, 0.003);
}

// Sample means of tau and R sit within 5 standard errors of the closed forms.
TEST(ModelProperty, SampleMeansMatchExpectations) {
  SeededRng gen(2024);
  const int n = 200'000;
  for (int trial = 0; trial < 5; ++trial) {
    const auto m = testing::random_model(gen, 3, 2);
    for (std::size_t i = 0; i < m.num_pairs(); ++i) {
      SeededRng rng = SeededRng::derive(trial, {i});
      double st = 0, st2 = 0, sr = 0, sr2 = 0;
      for (int k = 0; k < n; ++k) {
        const auto x = sample_transition(m, m.state_of(i), m.action_of(i), rng);
        st += x.tau;
        st2 += x.tau * x.tau;
        sr += x.reward;
        sr2 += x.reward * x.reward;
      }
      const double mt = st / n, mr = sr / n;
      const double se_t = std::sqrt(std::max(st2 / n - mt * mt, 0.0) / n);
      const double se_r = std::sqrt(std::max(sr2 / n - mr * mr, 0.0) / n);
      EXPECT_LE(std::abs(mt - m.expected_holding(i)), 5 * se_t + 1e-10) << "trial " << trial << " pair " << i;
      EXPECT_LE(std::abs(mr - m.expected_reward(i)), 5 * se_r + 1e-10) << "trial " << trial << " pair " << i;
    }
  }
}

TEST(ModelProperty, StructuralInvariants) {
  SeededRng gen(5);
  for (int trial = 0; trial < 200; ++trial) {
    const auto m = testing::random_model(gen);
    for (std::size_t i = 0; i < m.num_pairs(); ++i) {
      double total = 0.0;
      for (const auto& b : m.laws()[i].branches) total += b.prob;
      EXPECT_NEAR(total, 1.0, 1e-12);
      EXPECT_GT(m.expected_holding(i), 0.0);
      double ptotal = 0.0;
      for (double p : m.expectations().p[i]) ptotal += p;
      EXPECT_NEAR(ptotal, 1.0, 1e-12);
    }
    const auto rep = check_model_assumptions(m);
    EXPECT_TRUE(rep.holds);
    EXPECT_GT(rep.epsilon, 0.0);
    for (const auto& pm : rep.pairs) {
      EXPECT_TRUE(std::isfinite(pm.holding_second_moment));
      EXPECT_TRUE(std::isfinite(pm.reward_second_moment));
      EXPECT_LT(rep.epsilon, pm.positive_mass_threshold);
    }
  }
}

TEST(ModelProperty, JsonRoundTripIsExact) {
  SeededRng gen(77);
  for (int trial = 0; trial < 100; ++trial) {
    const auto m = testing::random_model(gen);
    const auto text = serialize_model_json(m);
    const auto back = parse_model_json(text);
    EXPECT_EQ(back.num_states(), m.num_states());
    EXPECT_EQ(back.num_actions(), m.num_actions());
    EXPECT_EQ(back.laws(), m.laws());
    EXPECT_EQ(serialize_model_json(back), text);
  }
}

TEST(ModelIo, MalformedInputIsRejected) {
  EXPECT_THROW(parse_model_json("{"), InputError);
  EXPECT_THROW(parse_model_json(R"({"num_states": 1, "num_actions": 1, "entries": []})"), Error);
}

TEST(Rng, StreamsAreReproducibleAndDistinct) {
  auto a = SeededRng::derive(9, {1, 2, 3});
  auto b = SeededRng::derive(9, {1, 2, 3});
  auto c = SeededRng::derive(9, {1, 2, 4});
  int same = 0;
  for (int k = 0; k < 100; ++k) {
    const auto x = a();
    EXPECT_EQ(x, b());
    same += x == c() ? 1 : 0;
  }
  EXPECT_EQ(same, 0);
  SeededRng r(3);
  for (int k = 0; k < 10'000; ++k) {
    const double u = r.uniform();
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
    const double v = r.uniform_open_below();
    EXPECT_GT(v, 0.0);
    EXPECT_LE(v, 1.0);
    EXPECT_LT(r.below(7), 7u);
  }
}

TEST(Rng, CounterRewindReplays) {
  SeededRng r(11, 5);
  r();
  r();
  const auto at = r.counter();
  const auto x = r();
  r.set_counter(at);
  EXPECT_EQ(r(), x);
}

}  // namespace
}  // namespace smdp
