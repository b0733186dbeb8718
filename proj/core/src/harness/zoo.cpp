#include "smdp/harness/zoo.hpp"

#include <cmath>
#include <limits>

#include "smdp/communication.hpp"
#include "smdp/error.hpp"
#include "smdp/gain_oracle.hpp"

namespace smdp::harness {

namespace {

using holding::Exponential;

TransitionLaw det(StateId next, double tau, double r) {
  return {{Branch{1.0, next, holding::Deterministic{tau}, reward::Deterministic{r}}}};
}

// Same holding and reward law on every branch.
TransitionLaw spread(std::vector<std::pair<double, StateId>> next, HoldingTimeDist h,
                     RewardDist r) {
  TransitionLaw law;
  for (auto [p, s] : next) law.branches.push_back(Branch{p, s, h, r});
  return law;
}

SmdpModel wc3_model(double reward) {
  // 0: stay / switch, 1: stay / switch, 2: both actions lead to 0.
  return SmdpModel(3, 2,
                   {det(0, 1.0, reward), det(1, 1.0, reward), det(1, 1.0, reward),
                    det(0, 1.0, reward), det(0, 1.0, 0.0), det(0, 1.0, 0.0)});
}

SmdpModel smdp_exp_model() {
  using reward::Gaussian;
  const reward::Discrete coin{{{0.5, 0.0}, {0.5, 4.0}}};
  const reward::Discrete jackpot{{{0.2, 5.0}, {0.8, 0.0}}};
  return SmdpModel(3, 2,
                   {spread({{0.3, 0}, {0.7, 1}}, Exponential{2.0}, Gaussian{1.0, 0.5}),
                    spread({{1.0, 2}}, Exponential{1.0}, coin),
                    spread({{0.5, 0}, {0.5, 2}}, Exponential{0.5}, Gaussian{3.0, 1.0}),
                    spread({{0.4, 0}, {0.6, 1}}, Exponential{4.0 / 3.0}, Gaussian{0.5, 0.2}),
                    spread({{1.0, 0}}, Exponential{1.0}, jackpot),
                    spread({{0.5, 1}, {0.5, 2}}, Exponential{1.25}, Gaussian{1.5, 1.0})});
}

void certify(const ModelZooEntry& e) {
  const auto comm = classify_communication(e.model);
  if (is_weakly_communicating(comm) != e.weakly_communicating)
    throw ModelError("zoo model " + e.name + ": communication class does not match its record");
  if (std::abs(e.model.t_min() - e.t_min) > 1e-12)
    throw ModelError("zoo model " + e.name + ": t_min does not match its record");
  if (e.weakly_communicating) {
    const double r = gain_oracle(e.model).rstar;
    if (std::abs(r - e.rstar) > 1e-9)
      throw ModelError("zoo model " + e.name + ": oracle gain " + std::to_string(r) +
                       " does not match the recorded " + std::to_string(e.rstar));
  }
}

}  // namespace

std::vector<ModelZooEntry> model_zoo() {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<ModelZooEntry> zoo;
  zoo.push_back({"unit1", "one state; action 0 pays 3 per unit time, action 1 pays 2",
                 SmdpModel(1, 2, {det(0, 1.0, 3.0), det(0, 2.0, 4.0)}), true, 3.0, 1.0});
  zoo.push_back({"cycle2", "two-state deterministic cycle with rewards (4, 0)",
                 SmdpModel(2, 1, {det(1, 1.0, 4.0), det(0, 1.0, 0.0)}), true, 2.0, 1.0});
  zoo.push_back({"wc3",
                 "states 0 and 1 with stay/switch paying 1; state 2 transient, moves to 0 paying 0",
                 wc3_model(1.0), true, 1.0, 1.0});
  zoo.push_back({"wc3-zero", "wc3 with every reward set to 0", wc3_model(0.0), true, 0.0, 1.0});
  zoo.push_back({"smdp-exp",
                 "three communicating states, exponential holding times, stochastic rewards",
                 smdp_exp_model(), true, 70.0 / 41.0, 0.5});
  zoo.push_back({"split2", "two absorbing states; not weakly communicating",
                 SmdpModel(2, 1, {det(0, 1.0, 1.0), det(1, 1.0, 0.0)}), false, nan, 1.0});
  for (const auto& e : zoo) certify(e);
  return zoo;
}

ModelZooEntry zoo_entry(const std::string& name) {
  for (auto& e : model_zoo())
    if (e.name == name) return e;
  throw InputError("unknown zoo model '" + name + "'");
}

bool is_zoo_name(const std::string& name) {
  for (const char* n : {"unit1", "cycle2", "wc3", "wc3-zero", "smdp-exp", "split2"})
    if (name == n) return true;
  return false;
}

}  // namespace smdp::harness
