#pragma once

#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "smdp/rng.hpp"

namespace smdp {

/// (probability, value) atom of a finitely supported law.
struct Atom {
  double prob;
  double value;
  bool operator==(const Atom&) const = default;
};

namespace holding {
struct Deterministic {
  double t;
  bool operator==(const Deterministic&) const = default;
};
struct Exponential {
  double rate;
  bool operator==(const Exponential&) const = default;
};
struct Discrete {
  std::vector<Atom> atoms;
  bool operator==(const Discrete&) const = default;
};
}  // namespace holding

namespace reward {
struct Deterministic {
  double r;
  bool operator==(const Deterministic&) const = default;
};
struct Gaussian {
  double mean;
  double stddev;
  bool operator==(const Gaussian&) const = default;
};
struct Discrete {
  std::vector<Atom> atoms;
  bool operator==(const Discrete&) const = default;
};
}  // namespace reward

using HoldingTimeDist =
    std::variant<holding::Deterministic, holding::Exponential, holding::Discrete>;
using RewardDist =
    std::variant<reward::Deterministic, reward::Gaussian, reward::Discrete>;

/// Throws ModelError when the law is outside the admitted family
/// (non-positive deterministic time or rate, all mass at zero, bad atoms).
/// Discrete atoms are renormalised in place after the 1e-12 sum check.
void validate(HoldingTimeDist& d);
void validate(RewardDist& d);

double mean(const HoldingTimeDist& d);
double second_moment(const HoldingTimeDist& d);
double mean(const RewardDist& d);
double second_moment(const RewardDist& d);

/// Largest eps with P(tau <= eps) < 1 guaranteed; any eps strictly below this
/// value witnesses the non-degeneracy condition on holding times.
double positive_mass_threshold(const HoldingTimeDist& d);

double sample(const HoldingTimeDist& d, SeededRng& rng);
double sample(const RewardDist& d, SeededRng& rng);

std::string describe(const HoldingTimeDist& d);
std::string describe(const RewardDist& d);

}  // namespace smdp
