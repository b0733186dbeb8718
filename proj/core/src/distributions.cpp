#include "smdp/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "smdp/error.hpp"

namespace smdp {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void validate_atoms(std::vector<Atom>& atoms, const char* what) {
  if (atoms.empty()) throw ModelError(std::string(what) + ": discrete law without atoms");
  double total = 0.0;
  for (const Atom& a : atoms) {
    if (!(a.prob > 0.0 && a.prob <= 1.0) || !std::isfinite(a.value))
      throw ModelError(std::string(what) + ": atom probability must lie in (0,1] with finite value");
    total += a.prob;
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw ModelError(std::string(what) + ": atom probabilities sum to " + std::to_string(total));
  if (std::abs(total - 1.0) > 1e-15)
    for (Atom& a : atoms) a.prob /= total;
}

double sample_atoms(const std::vector<Atom>& atoms, SeededRng& rng) {
  double u = rng.uniform();
  for (const Atom& a : atoms) {
    if (u < a.prob) return a.value;
    u -= a.prob;
  }
  return atoms.back().value;
}

double atoms_moment(const std::vector<Atom>& atoms, int k) {
  double m = 0.0;
  for (const Atom& a : atoms) m += a.prob * (k == 1 ? a.value : a.value * a.value);
  return m;
}

std::string atoms_text(const std::vector<Atom>& atoms) {
  std::ostringstream os;
  os << '{';
  for (std::size_t i = 0; i < atoms.size(); ++i)
    os << (i ? ", " : "") << atoms[i].prob << ':' << atoms[i].value;
  os << '}';
  return os.str();
}

}  // namespace

void validate(HoldingTimeDist& d) {
  std::visit(overloaded{
                 [](holding::Deterministic& x) {
                   if (!(x.t > 0.0) || !std::isfinite(x.t))
                     throw ModelError("holding time: deterministic t must be positive");
                 },
                 [](holding::Exponential& x) {
                   if (!(x.rate > 0.0) || !std::isfinite(x.rate))
                     throw ModelError("holding time: exponential rate must be positive");
                 },
                 [](holding::Discrete& x) {
                   validate_atoms(x.atoms, "holding time");
                   bool positive = false;
                   for (const Atom& a : x.atoms) {
                     if (a.value < 0.0) throw ModelError("holding time: negative support point");
                     positive = positive || a.value > 0.0;
                   }
                   if (!positive) throw ModelError("holding time: all mass at tau = 0");
                 },
             },
             d);
}

void validate(RewardDist& d) {
  std::visit(overloaded{
                 [](reward::Deterministic& x) {
                   if (!std::isfinite(x.r)) throw ModelError("reward: non-finite value");
                 },
                 [](reward::Gaussian& x) {
                   if (!std::isfinite(x.mean) || !(x.stddev >= 0.0) || !std::isfinite(x.stddev))
                     throw ModelError("reward: gaussian needs finite mean and stddev >= 0");
                 },
                 [](reward::Discrete& x) { validate_atoms(x.atoms, "reward"); },
             },
             d);
}

double mean(const HoldingTimeDist& d) {
  return std::visit(overloaded{
                        [](const holding::Deterministic& x) { return x.t; },
                        [](const holding::Exponential& x) { return 1.0 / x.rate; },
                        [](const holding::Discrete& x) { return atoms_moment(x.atoms, 1); },
                    },
                    d);
}

double second_moment(const HoldingTimeDist& d) {
  return std::visit(overloaded{
                        [](const holding::Deterministic& x) { return x.t * x.t; },
                        [](const holding::Exponential& x) { return 2.0 / (x.rate * x.rate); },
                        [](const holding::Discrete& x) { return atoms_moment(x.atoms, 2); },
                    },
                    d);
}

double mean(const RewardDist& d) {
  return std::visit(overloaded{
                        [](const reward::Deterministic& x) { return x.r; },
                        [](const reward::Gaussian& x) { return x.mean; },
                        [](const reward::Discrete& x) { return atoms_moment(x.atoms, 1); },
                    },
                    d);
}

double second_moment(const RewardDist& d) {
  return std::visit(
      overloaded{
          [](const reward::Deterministic& x) { return x.r * x.r; },
          [](const reward::Gaussian& x) { return x.mean * x.mean + x.stddev * x.stddev; },
          [](const reward::Discrete& x) { return atoms_moment(x.atoms, 2); },
      },
      d);
}

double positive_mass_threshold(const HoldingTimeDist& d) {
  return std::visit(overloaded{
                        [](const holding::Deterministic& x) { return x.t; },
                        [](const holding::Exponential&) { return std::numeric_limits<double>::infinity(); },
                        [](const holding::Discrete& x) {
                          double m = 0.0;
                          for (const Atom& a : x.atoms) m = std::max(m, a.value);
                          return m;
                        },
                    },
                    d);
}

double sample(const HoldingTimeDist& d, SeededRng& rng) {
  return std::visit(overloaded{
                        [](const holding::Deterministic& x) { return x.t; },
                        [&rng](const holding::Exponential& x) {
                          return -std::log(rng.uniform_open_below()) / x.rate;
                        },
                        [&rng](const holding::Discrete& x) { return sample_atoms(x.atoms, rng); },
                    },
                    d);
}

double sample(const RewardDist& d, SeededRng& rng) {
  return std::visit(overloaded{
                        [](const reward::Deterministic& x) { return x.r; },
                        [&rng](const reward::Gaussian& x) {
                          return x.stddev == 0.0 ? x.mean : x.mean + x.stddev * rng.normal();
                        },
                        [&rng](const reward::Discrete& x) { return sample_atoms(x.atoms, rng); },
                    },
                    d);
}

std::string describe(const HoldingTimeDist& d) {
  std::ostringstream os;
  std::visit(overloaded{
                 [&os](const holding::Deterministic& x) { os << "Deterministic(" << x.t << ")"; },
                 [&os](const holding::Exponential& x) { os << "Exponential(rate=" << x.rate << ")"; },
                 [&os](const holding::Discrete& x) { os << "Discrete" << atoms_text(x.atoms); },
             },
             d);
  return os.str();
}

std::string describe(const RewardDist& d) {
  std::ostringstream os;
  std::visit(overloaded{
                 [&os](const reward::Deterministic& x) { os << "Deterministic(" << x.r << ")"; },
                 [&os](const reward::Gaussian& x) {
                   os << "Gaussian(" << x.mean << ", " << x.stddev << ")";
                 },
                 [&os](const reward::Discrete& x) { os << "Discrete" << atoms_text(x.atoms); },
             },
             d);
  return os.str();
}

}  // namespace smdp
