#include <gtest/gtest.h>

#include <cmath>

#include "generators.hpp"
#include "smdp/communication.hpp"
#include "smdp/error.hpp"
#include "smdp/gain_oracle.hpp"
#include "smdp/harness/zoo.hpp"
#include "smdp/ode.hpp"
#include "smdp/operators.hpp"
#include "smdp/rvi.hpp"

namespace smdp {
namespace {

TransitionLaw det(StateId next, double tau, double r) {
  return {{Branch{1.0, next, holding::Deterministic{tau}, reward::Deterministic{r}}}};
}

std::vector<double> plus(std::vector<double> v, double c) {
  for (double& x : v) x += c;
  return v;
}

TEST(OperatorT, Examples) {
  const auto zero = harness::zoo_entry("wc3-zero").model;
  const std::vector<double> c(6, 2.75);
  EXPECT_EQ(operator_T(zero, c, 1.0), c);

  const SmdpModel one(1, 1, {det(0, 1.0, 5.0)});
  EXPECT_EQ(operator_T(one, std::vector<double>{0.0}, 1.0), std::vector<double>{5.0});

  const auto wc3 = harness::zoo_entry("wc3").model;
  EXPECT_EQ(operator_T(wc3, std::vector<double>(6, 0.0), wc3.t_min()),
            (std::vector<double>{1, 1, 1, 1, 0, 0}));
}

TEST(OperatorT, AlphaBarRange) {
  const auto m = harness::zoo_entry("smdp-exp").model;
  const std::vector<double> q(6, 0.0);
  EXPECT_NO_THROW(operator_T(m, q, 0.5));
  EXPECT_THROW(operator_T(m, q, 0.5000001), ParameterError);
  EXPECT_THROW(operator_T(m, q, 0.0), ParameterError);
  EXPECT_THROW(operator_T(m, std::vector<double>(5, 0.0), 0.5), DomainError);
}

TEST(Operators, HExamples) {
  const auto m = harness::zoo_entry("smdp-exp").model;
  const auto f = RateFunction::mean(6);
  for (double v : h_infinity_eval(m, f, std::vector<double>(6, 0.0), m.t_min())) EXPECT_EQ(v, 0.0);

  SeededRng gen(3);
  const auto q = testing::random_vector(gen, 6, 5.0);
  const auto a = h_prime_eval(m, q, 70.0 / 41.0, m.t_min());
  const auto b = h_prime_eval(m, plus(q, 3.7), 70.0 / 41.0, m.t_min());
  for (std::size_t i = 0; i < 6; ++i) EXPECT_NEAR(a[i], b[i], 1e-12);

  // h = T - q - abar f(q), the alternative form.
  const auto h = h_eval(m, f, q, m.t_min());
  const auto t = operator_T(m, q, m.t_min());
  for (std::size_t i = 0; i < 6; ++i) EXPECT_NEAR(h[i], t[i] - q[i] - m.t_min() * f(q), 1e-12);
}

TEST(OperatorsProperty, NonexpansiveAndTranslationEquivariant) {
  SeededRng gen(21);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto m = testing::random_model(gen, 4, 3);
    const double abar = m.t_min() * (trial % 2 == 0 ? 1.0 : testing::between(gen, 0.1, 1.0));
    const auto q = testing::random_vector(gen, m.num_pairs(), 10.0);
    const auto q2 = testing::random_vector(gen, m.num_pairs(), 10.0);
    for (auto op : {&operator_T, &operator_T_zero}) {
      const auto tq = op(m, q, abar);
      EXPECT_LE(sup_distance(tq, op(m, q2, abar)), sup_distance(q, q2) * (1 + 1e-12) + 1e-12);
      const double c = testing::between(gen, -5, 5);
      const auto tc = op(m, plus(q, c), abar);
      for (std::size_t i = 0; i < tq.size(); ++i) EXPECT_NEAR(tc[i], tq[i] + c, 1e-12);
    }
  }
}

TEST(OperatorsProperty, HScalingLimit) {
  SeededRng gen(22);
  for (const char* name : {"wc3", "smdp-exp", "cycle2"}) {
    const auto m = harness::zoo_entry(name).model;
    const auto f = RateFunction::composite(
        Combinator::WeightedSum,
        {RateFunction::mean(m.num_pairs()), RateFunction::max_over(m.num_pairs(), 1.5, 0.5, {0})}, {0.5, 0.5});
    std::vector<std::vector<double>> grid;
    for (int k = 0; k < 20; ++k) grid.push_back(testing::random_vector(gen, m.num_pairs(), 1.0));
    double prev = std::numeric_limits<double>::infinity();
    for (int k = 0; k <= 20; ++k) {
      const double c = std::ldexp(1.0, k);
      double sup = 0.0;
      for (const auto& q : grid) {
        auto cq = q;
        for (double& v : cq) v *= c;
        const auto hc = h_eval(m, f, cq, m.t_min());
        const auto hi = h_infinity_eval(m, f, q, m.t_min());
        for (std::size_t i = 0; i < q.size(); ++i) sup = std::max(sup, std::abs(hc[i] / c - hi[i]));
      }
      EXPECT_LE(sup, prev * (1 + 1e-9) + 1e-15) << name << " k " << k;
      prev = sup;
    }
    EXPECT_LE(prev, 1e-5) << name;
  }
}

TEST(ClassicalRvi, Examples) {
  const SmdpModel one(1, 1, {det(0, 2.0, 6.0)});
  const auto s = classical_rvi(one, RateFunction::mean(1), QTable(1, 1));
  EXPECT_NEAR(s.rstar, 3.0, 1e-9);

  const auto zero = harness::zoo_entry("wc3-zero").model;
  SeededRng gen(2);
  const QTable q0(2, testing::random_vector(gen, 6, 4.0));
  const auto z = classical_rvi(zero, RateFunction::mean(6), q0);
  EXPECT_NEAR(z.rstar, 0.0, 1e-9);
  for (std::size_t i = 0; i < 6; ++i) EXPECT_NEAR(z.q[i], z.q[0], 1e-8);
  EXPECT_NEAR(RateFunction::mean(6)(z.q.values()), 0.0, 1e-9);
}

TEST(ClassicalRvi, Errors) {
  const auto m = harness::zoo_entry("wc3").model;
  const auto f = RateFunction::mean(6);
  RviOptions o;
  o.alpha_bar = 1.0;
  EXPECT_THROW(classical_rvi(m, f, QTable(3, 2), o), ParameterError);
  o.alpha_bar = -0.1;
  EXPECT_THROW(classical_rvi(m, f, QTable(3, 2), o), ParameterError);
  o.alpha_bar = 0.0;
  o.max_iters = 3;
  try {
    classical_rvi(m, f, QTable(3, 2, 100.0), o);
    FAIL() << "expected IterationLimitError";
  } catch (const IterationLimitError& e) {
    EXPECT_GT(e.last_residual(), 0.0);
  }
}

TEST(ClassicalRvi, MatchesOracleOnZoo) {
  for (const char* name : {"unit1", "cycle2", "wc3", "wc3-zero", "smdp-exp"}) {
    const auto e = harness::zoo_entry(name);
    const auto f = RateFunction::mean(e.model.num_pairs());
    const auto s = classical_rvi(e.model, f, QTable(e.model.num_states(), e.model.num_actions()));
    EXPECT_NEAR(s.rstar, gain_oracle(e.model).rstar, 1e-8) << name;
    EXPECT_LE(sup_norm(h_eval(e.model, f, s.q.values(), e.model.t_min())), 1e-8) << name;
    EXPECT_NEAR(s.residual, sup_norm(h_prime_eval(e.model, s.q.values(), s.rstar, 0.9 * e.model.t_min())), 1e-15);
    ASSERT_FALSE(s.residual_history.empty());
  }
}

TEST(ClassicalRviProperty, FixedPointsOnRandomCommunicatingModels) {
  SeededRng gen(40);
  int solved = 0;
  while (solved < 30) {
    const auto m = testing::random_model(gen, 4, 3);
    if (!is_weakly_communicating(classify_communication(m))) continue;
    const auto f = testing::random_rate_function(gen, m.num_pairs(), 1);
    RviOptions o;
    o.tol = 1e-9;
    const auto s = classical_rvi(m, f, QTable(m.num_states(), m.num_actions()), o);
    EXPECT_LE(sup_norm(h_eval(m, f, s.q.values(), m.t_min())), o.tol);
    EXPECT_NEAR(f(s.q.values()), gain_oracle(m).rstar, 10 * o.tol);
    ++solved;
  }
}

TEST(GainOracle, Examples) {
  EXPECT_DOUBLE_EQ(gain_oracle(harness::zoo_entry("unit1").model).rstar, 3.0);
  EXPECT_DOUBLE_EQ(gain_oracle(harness::zoo_entry("cycle2").model).rstar, 2.0);
  const auto wc3 = gain_oracle(harness::zoo_entry("wc3").model);
  EXPECT_DOUBLE_EQ(wc3.rstar, 1.0);
  EXPECT_EQ(wc3.per_policy.size(), 8u);
  EXPECT_EQ(wc3.optimal_policies.size(), 8u);

  const SmdpModel big(7, 10, std::vector<TransitionLaw>(70, det(0, 1, 0)));
  EXPECT_THROW(gain_oracle(big), BudgetError);
  EXPECT_THROW(gain_oracle(harness::zoo_entry("wc3").model, 7), BudgetError);
}

TEST(GainOracle, SmdpExpValue) {
  const auto r = gain_oracle(harness::zoo_entry("smdp-exp").model);
  EXPECT_NEAR(r.rstar, 70.0 / 41.0, 1e-12);
  ASSERT_EQ(r.optimal_policies.size(), 1u);
}

TEST(Ode, HInfinityEquilibrium) {
  const auto m = harness::zoo_entry("smdp-exp").model;
  const auto field = make_field(m, RateFunction::mean(6), {FieldKind::HInfinity});
  const auto tr = integrate_ode(field, std::vector<double>(6, 0.0), 5.0, 1e-2, 100);
  for (const auto& x : tr.states)
    for (double v : x) EXPECT_EQ(v, 0.0);
  EXPECT_EQ(tr.times.front(), 0.0);
  EXPECT_NEAR(tr.times.back(), 5.0, 1e-12);
}

TEST(Ode, HPrimeDistanceNonincreasing) {
  for (const char* name : {"wc3", "smdp-exp"}) {
    const auto m = harness::zoo_entry(name).model;
    const auto f = RateFunction::mean(6);
    const auto sol = classical_rvi(m, f, QTable(3, 2));
    const auto field = make_field(m, f, {FieldKind::HPrime, 0.0, sol.rstar});
    SeededRng gen(17);
    for (int k = 0; k < 5; ++k) {
      const auto tr = integrate_ode(field, testing::random_vector(gen, 6, 10.0), 10.0, 1e-3, 50);
      double prev = std::numeric_limits<double>::infinity();
      for (const auto& y : tr.states) {
        const double d = sup_distance(y, sol.q.values());
        EXPECT_LE(d, prev + 1e-9) << name;
        prev = d;
      }
    }
  }
}

// x from h against y from h' plus the scalar z with dz = abar r* - abar f(y + z).
TEST(Ode, Decomposition) {
  const auto m = harness::zoo_entry("smdp-exp").model;
  const auto f = RateFunction::max_over(6, 0.5, 1.0, {0, 2, 4});
  const double rstar = gain_oracle(m).rstar;
  const double abar = m.t_min();
  const auto hx = make_field(m, f, {FieldKind::H});
  const auto hy = make_field(m, f, {FieldKind::HPrime, 0.0, rstar});
  const VectorField joint = [&](std::span<const double> s, std::span<double> out) {
    hx(s.subspan(0, 6), out.subspan(0, 6));
    hy(s.subspan(6, 6), out.subspan(6, 6));
    std::vector<double> yz(s.begin() + 6, s.begin() + 12);
    for (double& v : yz) v += s[12];
    out[12] = abar * rstar - abar * f(yz);
  };
  SeededRng gen(19);
  auto x0 = testing::random_vector(gen, 6, 5.0);
  std::vector<double> s0 = x0;
  s0.insert(s0.end(), x0.begin(), x0.end());
  s0.push_back(0.0);
  const auto tr = integrate_ode(joint, s0, 20.0, 1e-3, 100);
  for (const auto& s : tr.states)
    for (std::size_t i = 0; i < 6; ++i) EXPECT_NEAR(s[i], s[6 + i] + s[12], 1e-6);
}

TEST(Ode, HInfinityIsGloballyStable) {
  const auto m = harness::zoo_entry("wc3").model;
  const auto f = RateFunction::min_over(6, 0.0, 2.0, {1, 3});
  const auto field = make_field(m, f, {FieldKind::HInfinity});
  SeededRng gen(23);
  for (int k = 0; k < 50; ++k) {
    const auto tr = integrate_ode(field, testing::random_vector(gen, 6, 1.0), 40.0, 1e-2, 4000);
    EXPECT_LE(sup_norm(tr.states.back()), 1e-4);
  }
}

TEST(Ode, NonFiniteStateDiverges) {
  const VectorField blow = [](std::span<const double> x, std::span<double> out) { out[0] = x[0] * x[0]; };
  EXPECT_THROW(integrate_ode(blow, {1.0}, 5.0, 1e-2), DivergenceError);
}

}  // namespace
}  // namespace smdp
