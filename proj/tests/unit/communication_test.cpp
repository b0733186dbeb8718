#include <gtest/gtest.h>

#include <cmath>

#include "generators.hpp"
#include "oracles.hpp"
#include "smdp/communication.hpp"
#include "smdp/error.hpp"
#include "smdp/harness/zoo.hpp"

namespace smdp {
namespace {

TransitionLaw det(StateId next, double tau = 1.0, double r = 0.0) {
  return {{Branch{1.0, next, holding::Deterministic{tau}, reward::Deterministic{r}}}};
}

TEST(Communication, SingleState) {
  const SmdpModel m(1, 1, {det(0)});
  const auto c = classify_communication(m);
  ASSERT_TRUE(is_weakly_communicating(c));
  EXPECT_EQ(std::get<WeaklyCommunicating>(c).closed_class, std::vector<StateId>{0});
  EXPECT_TRUE(std::get<WeaklyCommunicating>(c).transient.empty());
}

TEST(Communication, TwoSelfLoopsAreSplit) {
  const SmdpModel m(2, 2, {det(0), det(0), det(1), det(1)});
  const auto c = classify_communication(m);
  ASSERT_FALSE(is_weakly_communicating(c));
  EXPECT_EQ(std::get<NotWeaklyCommunicating>(c).closed_classes.size(), 2u);
  EXPECT_FALSE(std::get<NotWeaklyCommunicating>(c).witness.empty());
}

TEST(Communication, Wc3) {
  const auto c = classify_communication(harness::zoo_entry("wc3").model);
  ASSERT_TRUE(is_weakly_communicating(c));
  EXPECT_EQ(std::get<WeaklyCommunicating>(c).closed_class, (std::vector<StateId>{0, 1}));
  EXPECT_EQ(std::get<WeaklyCommunicating>(c).transient, std::vector<StateId>{2});
}

// State 1 reaches the closed class {0} under action 1, but action 0 keeps it
// in place forever, so it is not transient under every policy.
TEST(Communication, TransientTrapIsRejected) {
  const SmdpModel m(2, 2, {det(0), det(0), det(1), det(0)});
  const auto c = classify_communication(m);
  ASSERT_FALSE(is_weakly_communicating(c));
  EXPECT_EQ(std::get<NotWeaklyCommunicating>(c).trapping_states, std::vector<StateId>{1});
  EXPECT_FALSE(testing::weakly_communicating_oracle(m));
}

TEST(CommunicationProperty, AgreesWithPolicyEnumeration) {
  SeededRng gen(31337);
  int positives = 0, negatives = 0;
  for (int trial = 0; trial < 2000; ++trial) {
    const auto m = testing::random_model(gen, 4, 3, trial % 2 == 0);
    const bool expected = testing::weakly_communicating_oracle(m);
    EXPECT_EQ(is_weakly_communicating(classify_communication(m)), expected) << "trial " << trial;
    (expected ? positives : negatives)++;
  }
  // The generator must exercise both outcomes for the comparison to mean anything.
  EXPECT_GT(positives, 100);
  EXPECT_GT(negatives, 100);
}

TEST(InducedChain, IdentityChain) {
  const SmdpModel m(3, 1, {det(0), det(1), det(2)});
  const auto ch = induced_chain(m, {{0, 0, 0}});
  ASSERT_EQ(ch.recurrent_classes.size(), 3u);
  for (std::size_t k = 0; k < 3; ++k) {
    ASSERT_EQ(ch.recurrent_classes[k].size(), 1u);
    EXPECT_DOUBLE_EQ(ch.stationary[k][ch.recurrent_classes[k][0]], 1.0);
  }
}

TEST(InducedChain, TwoCycle) {
  const SmdpModel m(2, 1, {det(1), det(0)});
  const auto ch = induced_chain(m, {{0, 0}});
  ASSERT_EQ(ch.recurrent_classes.size(), 1u);
  EXPECT_NEAR(ch.stationary[0][0], 0.5, 1e-15);
  EXPECT_NEAR(ch.stationary[0][1], 0.5, 1e-15);
}

TEST(InducedChain, Wc3StayPolicy) {
  const auto m = harness::zoo_entry("wc3").model;
  const auto ch = induced_chain(m, {{0, 0, 0}});
  ASSERT_EQ(ch.recurrent_classes.size(), 2u);
  std::vector<std::vector<StateId>> classes = ch.recurrent_classes;
  std::sort(classes.begin(), classes.end());
  EXPECT_EQ(classes[0], std::vector<StateId>{0});
  EXPECT_EQ(classes[1], std::vector<StateId>{1});
  // Switching at 0 only drains into 1.
  const auto ch2 = induced_chain(m, {{1, 0, 0}});
  ASSERT_EQ(ch2.recurrent_classes.size(), 1u);
  EXPECT_EQ(ch2.recurrent_classes[0], std::vector<StateId>{1});
  EXPECT_THROW(induced_chain(m, {{0, 0}}), DomainError);
}

TEST(InducedChainProperty, StationaryIsInvariant) {
  SeededRng gen(8);
  for (int trial = 0; trial < 500; ++trial) {
    const auto m = testing::random_model(gen, 6, 3);
    DeterministicPolicy pi;
    for (StateId s = 0; s < m.num_states(); ++s) pi.actions.push_back(gen.below(m.num_actions()));
    const auto ch = induced_chain(m, pi);
    const auto rec = testing::recurrent_states(testing::policy_edges(m, pi.actions));
    std::vector<bool> seen(m.num_states(), false);
    ASSERT_FALSE(ch.recurrent_classes.empty());
    for (std::size_t k = 0; k < ch.recurrent_classes.size(); ++k) {
      const auto& mu = ch.stationary[k];
      double total = 0.0;
      for (std::size_t t = 0; t < mu.size(); ++t) {
        double flow = 0.0;
        for (std::size_t s = 0; s < mu.size(); ++s) flow += mu[s] * ch.transition[s][t];
        EXPECT_LE(std::abs(flow - mu[t]), 1e-10);
        EXPECT_GE(mu[t], -1e-14);
        total += mu[t];
      }
      EXPECT_NEAR(total, 1.0, 1e-12);
      const auto ref = testing::stationary_by_power(ch.transition, ch.recurrent_classes[k]);
      for (std::size_t s = 0; s < mu.size(); ++s) EXPECT_NEAR(mu[s], ref[s], 1e-9);
      for (auto s : ch.recurrent_classes[k]) {
        EXPECT_TRUE(rec[s]);
        seen[s] = true;
      }
    }
    for (std::size_t s = 0; s < m.num_states(); ++s) EXPECT_EQ(seen[s], static_cast<bool>(rec[s]));
  }
}

}  // namespace
}  // namespace smdp
