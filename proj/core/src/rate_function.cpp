#include "smdp/rate_function.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "json_support.hpp"
#include "smdp/error.hpp"
#include "smdp/model.hpp"

namespace smdp {

struct RateFunction::Node {
  RateKind kind = RateKind::Affine;
  std::size_t dim = 0;
  double b = 0.0;
  double beta = 1.0;
  std::vector<double> theta;
  std::vector<std::size_t> subset;
  Combinator psi = Combinator::WeightedSum;
  std::vector<double> weights;
  std::vector<RateFunction> children;
  double lipschitz = 0.0;
  bool sistr = true;
  // reference_pair
  std::size_t pair = 0;
  std::size_t num_actions = 1;
  double r = 0.0;
  double t = 1.0;
  std::vector<double> p;
};

namespace {

void check_dim(std::size_t expected, std::span<const double> x) {
  if (x.size() != expected)
    throw DomainError("rate function expects dimension " + std::to_string(expected) + ", got " +
                      std::to_string(x.size()));
}

double phi(double xa) { return 1.0 - std::exp(-xa) / 2.0; }

double example_2d(double x0, double x1, bool limit) {
  const double xa = (x0 - x1) / 2.0;
  const double xc = (x0 + x1) / 2.0;
  if (xa >= 0.0 && xc >= 0.0 && xc <= xa / 2.0) return limit ? 2.0 * xc : 2.0 * xc * phi(xa);
  if (xa >= 0.0 && xc > xa / 2.0 && xc <= xa)
    return limit ? xa : 2.0 * (xa - xc) * phi(xa) + (2.0 * xc - xa);
  return xc;
}

double reference_pair_value(const RateFunction::Node& n, std::span<const double> q, bool limit) {
  double expected_next = 0.0;
  for (std::size_t s = 0; s < n.p.size(); ++s) {
    if (n.p[s] == 0.0) continue;
    double m = q[s * n.num_actions];
    for (std::size_t a = 1; a < n.num_actions; ++a) m = std::max(m, q[s * n.num_actions + a]);
    expected_next += n.p[s] * m;
  }
  return ((limit ? 0.0 : n.r) + expected_next - q[n.pair]) / n.t;
}

}  // namespace

RateFunction RateFunction::affine(double b, std::vector<double> theta, Validation v) {
  if (theta.empty()) throw ModelError("affine rate function needs a nonempty theta");
  const double sum = std::accumulate(theta.begin(), theta.end(), 0.0);
  if (v == Validation::Enforce && !(sum > 0.0))
    throw ModelError("affine rate function needs sum(theta) > 0");
  auto n = std::make_shared<Node>();
  n->kind = RateKind::Affine;
  n->dim = theta.size();
  n->b = b;
  n->lipschitz = 0.0;
  for (double t : theta) n->lipschitz += std::abs(t);
  n->sistr = sum > 0.0;
  n->theta = std::move(theta);
  return RateFunction(std::move(n));
}

RateFunction RateFunction::mean(std::size_t dim) {
  if (dim == 0) throw ModelError("mean rate function needs dim > 0");
  return affine(0.0, std::vector<double>(dim, 1.0 / static_cast<double>(dim)));
}

namespace {
std::shared_ptr<RateFunction::Node> extremum_node(RateKind kind, std::size_t dim, double b,
                                                  double beta, std::vector<std::size_t> subset) {
  if (dim == 0) throw ModelError("max/min rate function needs dim > 0");
  if (!(beta > 0.0)) throw ModelError("max/min rate function needs beta > 0");
  if (subset.empty()) throw ModelError("max/min rate function needs a nonempty subset");
  for (std::size_t i : subset)
    if (i >= dim) throw ModelError("max/min subset index out of range");
  std::sort(subset.begin(), subset.end());
  subset.erase(std::unique(subset.begin(), subset.end()), subset.end());
  auto n = std::make_shared<RateFunction::Node>();
  n->kind = kind;
  n->dim = dim;
  n->b = b;
  n->beta = beta;
  n->subset = std::move(subset);
  n->lipschitz = beta;
  return n;
}

std::vector<std::size_t> all_indices(std::size_t dim, std::vector<std::size_t> subset) {
  if (!subset.empty()) return subset;
  std::vector<std::size_t> all(dim);
  std::iota(all.begin(), all.end(), 0);
  return all;
}
}  // namespace

RateFunction RateFunction::max_over(std::size_t dim, double b, double beta,
                                    std::vector<std::size_t> subset) {
  return RateFunction(
      extremum_node(RateKind::MaxOverSubset, dim, b, beta, all_indices(dim, std::move(subset))));
}

RateFunction RateFunction::min_over(std::size_t dim, double b, double beta,
                                    std::vector<std::size_t> subset) {
  return RateFunction(
      extremum_node(RateKind::MinOverSubset, dim, b, beta, all_indices(dim, std::move(subset))));
}

RateFunction RateFunction::composite(Combinator psi, std::vector<RateFunction> children,
                                     std::vector<double> weights) {
  if (children.empty()) throw ModelError("composite rate function needs children");
  const std::size_t dim = children.front().dim();
  for (const auto& c : children)
    if (c.dim() != dim) throw ModelError("composite children must share one dimension");
  auto n = std::make_shared<Node>();
  n->kind = RateKind::Composite;
  n->dim = dim;
  n->psi = psi;
  n->sistr = std::all_of(children.begin(), children.end(),
                         [](const RateFunction& c) { return c.sistr_by_construction(); });
  if (psi == Combinator::WeightedSum) {
    if (weights.size() != children.size())
      throw ModelError("weighted-sum composite needs one weight per child");
    for (std::size_t k = 0; k < weights.size(); ++k) {
      if (!(weights[k] > 0.0)) throw ModelError("weighted-sum composite weights must be positive");
      n->lipschitz += weights[k] * children[k].lipschitz_bound();
    }
  } else {
    if (!weights.empty()) throw ModelError("max/min composite takes no weights");
    for (const auto& c : children) n->lipschitz = std::max(n->lipschitz, c.lipschitz_bound());
  }
  n->weights = std::move(weights);
  n->children = std::move(children);
  return RateFunction(std::move(n));
}

RateFunction RateFunction::example_2d() {
  auto n = std::make_shared<Node>();
  n->kind = RateKind::Example2D;
  n->dim = 2;
  n->lipschitz = 4.0;
  return RateFunction(std::move(n));
}

RateFunction RateFunction::reference_pair(const SmdpModel& model, std::size_t pair) {
  if (pair >= model.num_pairs()) throw DomainError("reference pair out of range");
  auto n = std::make_shared<Node>();
  n->kind = RateKind::ReferencePair;
  n->dim = model.num_pairs();
  n->pair = pair;
  n->num_actions = model.num_actions();
  n->r = model.expectations().r[pair];
  n->t = model.expectations().t[pair];
  n->p = model.expectations().p[pair];
  n->lipschitz = 2.0 / n->t;
  n->sistr = false;
  return RateFunction(std::move(n));
}

RateKind RateFunction::kind() const noexcept { return node_->kind; }
std::size_t RateFunction::dim() const noexcept { return node_->dim; }
double RateFunction::lipschitz_bound() const noexcept { return node_->lipschitz; }
bool RateFunction::sistr_by_construction() const noexcept { return node_->sistr; }
double RateFunction::offset() const noexcept { return node_->b; }
double RateFunction::scale() const noexcept { return node_->beta; }
const std::vector<double>& RateFunction::theta() const noexcept { return node_->theta; }
const std::vector<std::size_t>& RateFunction::subset() const noexcept { return node_->subset; }
Combinator RateFunction::combinator() const noexcept { return node_->psi; }
const std::vector<double>& RateFunction::weights() const noexcept { return node_->weights; }
const std::vector<RateFunction>& RateFunction::children() const noexcept {
  return node_->children;
}
std::size_t RateFunction::reference() const noexcept { return node_->pair; }

namespace {

double evaluate(const RateFunction::Node& n, std::span<const double> x, bool limit) {
  switch (n.kind) {
    case RateKind::Affine: {
      double v = limit ? 0.0 : n.b;
      for (std::size_t i = 0; i < n.dim; ++i) v += n.theta[i] * x[i];
      return v;
    }
    case RateKind::MaxOverSubset:
    case RateKind::MinOverSubset: {
      double m = x[n.subset.front()];
      for (std::size_t i : n.subset)
        m = n.kind == RateKind::MaxOverSubset ? std::max(m, x[i]) : std::min(m, x[i]);
      return (limit ? 0.0 : n.b) + n.beta * m;
    }
    case RateKind::Composite: {
      auto child = [&](const RateFunction& c) {
        return limit ? c.eval_scaling_limit(x) : c.eval(x);
      };
      if (n.psi == Combinator::WeightedSum) {
        double v = 0.0;
        for (std::size_t k = 0; k < n.children.size(); ++k) v += n.weights[k] * child(n.children[k]);
        return v;
      }
      double v = child(n.children.front());
      for (std::size_t k = 1; k < n.children.size(); ++k)
        v = n.psi == Combinator::Max ? std::max(v, child(n.children[k]))
                                     : std::min(v, child(n.children[k]));
      return v;
    }
    case RateKind::Example2D:
      return example_2d(x[0], x[1], limit);
    case RateKind::ReferencePair:
      return reference_pair_value(n, x, limit);
  }
  return 0.0;
}

}  // namespace

double RateFunction::eval(std::span<const double> x) const {
  check_dim(node_->dim, x);
  return evaluate(*node_, x, false);
}

double RateFunction::eval_scaling_limit(std::span<const double> x) const {
  check_dim(node_->dim, x);
  return evaluate(*node_, x, true);
}

double eval(const RateFunction& f, std::span<const double> x) { return f.eval(x); }
double eval_scaling_limit(const RateFunction& f, std::span<const double> x) {
  return f.eval_scaling_limit(x);
}

double solve_translation(const RateFunction& f, std::span<const double> x, double level,
                         const TranslationOptions& opts) {
  if (!(opts.tol > 0.0)) throw ParameterError("solve_translation needs tol > 0");
  check_dim(f.dim(), x);
  std::vector<double> buf(x.begin(), x.end());
  auto g = [&](double c) {
    for (std::size_t i = 0; i < buf.size(); ++i) buf[i] = x[i] + c;
    return f.eval(buf) - level;
  };

  double lo = -opts.initial_half_width;
  double hi = opts.initial_half_width;
  double g_lo = g(lo);
  double g_hi = g(hi);
  while (g_hi < 0.0) {
    lo = hi;
    g_lo = g_hi;
    hi *= opts.expansion_factor;
    if (hi > opts.bracket_bound)
      throw ContractViolation("solve_translation: f(x + c) stays below the level for c up to " +
                              std::to_string(opts.bracket_bound) + "; f is not SISTr at x");
    g_hi = g(hi);
  }
  while (g_lo > 0.0) {
    hi = lo;
    g_hi = g_lo;
    lo *= opts.expansion_factor;
    if (lo < -opts.bracket_bound)
      throw ContractViolation("solve_translation: f(x + c) stays above the level for c down to -" +
                              std::to_string(opts.bracket_bound) + "; f is not SISTr at x");
    g_lo = g(lo);
  }
  if (std::abs(g_lo) <= opts.tol) return lo;
  if (std::abs(g_hi) <= opts.tol) return hi;

  double mid = 0.5 * (lo + hi);
  for (int it = 0; it < opts.max_bisections; ++it) {
    mid = 0.5 * (lo + hi);
    const double gm = g(mid);
    if (std::abs(gm) <= opts.tol) return mid;
    if (gm < 0.0)
      lo = mid;
    else
      hi = mid;
    if (mid == lo && mid == hi) break;
  }
  const double gm = g(mid);
  if (std::abs(gm) <= opts.tol) return mid;
  throw ContractViolation("solve_translation: bisection stalled with residual " +
                          std::to_string(gm) + " (tolerance below floating-point resolution?)");
}

double solve_translation(const RateFunction& f, std::span<const double> x, double level,
                         double tol) {
  TranslationOptions opts;
  opts.tol = tol;
  return solve_translation(f, x, level, opts);
}

SistrReport check_sistr(const RateFunction& f, std::span<const std::vector<double>> probe_points,
                        std::span<const double> c_grid, bool scaling_limit) {
  for (std::size_t k = 1; k < c_grid.size(); ++k)
    if (!(c_grid[k] > c_grid[k - 1])) throw DomainError("check_sistr: c_grid must be strictly increasing");

  SistrReport rep;
  auto value = [&](const std::vector<double>& x, double c) {
    std::vector<double> y(x);
    for (double& v : y) v += c;
    return scaling_limit ? f.eval_scaling_limit(y) : f.eval(y);
  };
  auto fail = [&](const std::vector<double>& x, double c0, double c1, double v0, double v1,
                  std::string why) {
    rep.pass = false;
    rep.witnesses.push_back({x, c0, c1, v0, v1, std::move(why)});
  };

  for (const auto& x : probe_points) {
    for (std::size_t k = 1; k < c_grid.size(); ++k) {
      const double v0 = value(x, c_grid[k - 1]);
      const double v1 = value(x, c_grid[k]);
      if (!(v1 > v0)) fail(x, c_grid[k - 1], c_grid[k], v0, v1, "not strictly increasing");
    }
    const double base = value(x, 0.0);
    double prev_up = base;
    double prev_down = base;
    double prev_c = 0.0;
    for (double c : {1e3, 1e6, 1e9}) {
      const double up = value(x, c);
      const double down = value(x, -c);
      if (!(up > prev_up)) fail(x, prev_c, c, prev_up, up, "translation upward does not grow");
      if (!(down < prev_down)) fail(x, -c, -prev_c, down, prev_down, "translation downward does not fall");
      prev_up = up;
      prev_down = down;
      prev_c = c;
    }
    if (!(prev_up - base > 1.0)) fail(x, 0.0, 1e9, base, prev_up, "bounded above under translation");
    if (!(base - prev_down > 1.0)) fail(x, -1e9, 0.0, prev_down, base, "bounded below under translation");
  }
  return rep;
}

namespace detail {

RateFunction rate_function_from_json(const json& j, const SmdpModel* model) {
  const std::string ctx = "rate function";
  const std::string kind = text(j, "kind", ctx);
  const json empty = json::object();
  const json& params = j.contains("params") ? j.at("params") : empty;
  auto subset_of = [&](const json& p) {
    std::vector<std::size_t> d;
    if (p.contains("subset")) d = p.at("subset").get<std::vector<std::size_t>>();
    return d;
  };
  try {
    if (kind == "affine")
      return RateFunction::affine(params.value("b", 0.0),
                                  require(params, "theta", ctx).get<std::vector<double>>());
    if (kind == "mean") return RateFunction::mean(index(params, "dim", ctx));
    if (kind == "max")
      return RateFunction::max_over(index(params, "dim", ctx), params.value("b", 0.0),
                                    params.value("beta", 1.0), subset_of(params));
    if (kind == "min")
      return RateFunction::min_over(index(params, "dim", ctx), params.value("b", 0.0),
                                    params.value("beta", 1.0), subset_of(params));
    if (kind == "example_2d") return RateFunction::example_2d();
    if (kind == "reference_pair") {
      if (model == nullptr) throw InputError("reference_pair rate function needs a model");
      const std::size_t pair = params.contains("pair")
                                   ? index(params, "pair", ctx)
                                   : model->pair_index(index(params, "s", ctx), index(params, "a", ctx));
      return RateFunction::reference_pair(*model, pair);
    }
    if (kind == "composite") {
      const std::string psi = text(params, "combinator", ctx);
      std::vector<RateFunction> children;
      const json& arr = require(j, "children", ctx);
      for (const json& c : arr) children.push_back(rate_function_from_json(c, model));
      if (psi == "weighted_sum")
        return RateFunction::composite(Combinator::WeightedSum, std::move(children),
                                       require(params, "weights", ctx).get<std::vector<double>>());
      if (psi == "max") return RateFunction::composite(Combinator::Max, std::move(children));
      if (psi == "min") return RateFunction::composite(Combinator::Min, std::move(children));
      throw InputError(ctx + ": unknown combinator '" + psi + "'");
    }
  } catch (const json::exception& e) {
    throw InputError(ctx + ": " + e.what());
  }
  throw InputError(ctx + ": unknown kind '" + kind + "'");
}

json rate_function_to_json(const RateFunction& f) {
  switch (f.kind()) {
    case RateKind::Affine:
      return {{"kind", "affine"}, {"params", {{"b", f.offset()}, {"theta", f.theta()}}}};
    case RateKind::MaxOverSubset:
    case RateKind::MinOverSubset:
      return {{"kind", f.kind() == RateKind::MaxOverSubset ? "max" : "min"},
              {"params",
               {{"dim", f.dim()}, {"b", f.offset()}, {"beta", f.scale()}, {"subset", f.subset()}}}};
    case RateKind::Example2D:
      return {{"kind", "example_2d"}, {"params", json::object()}};
    case RateKind::ReferencePair: {
      // Pair index only; the model supplies r, t and p on parse.
      return {{"kind", "reference_pair"}, {"params", {{"pair", f.reference()}}}};
    }
    case RateKind::Composite: {
      json children = json::array();
      for (const auto& c : f.children()) children.push_back(rate_function_to_json(c));
      json params;
      switch (f.combinator()) {
        case Combinator::WeightedSum:
          params = {{"combinator", "weighted_sum"}, {"weights", f.weights()}};
          break;
        case Combinator::Max:
          params = {{"combinator", "max"}};
          break;
        case Combinator::Min:
          params = {{"combinator", "min"}};
          break;
      }
      return {{"kind", "composite"}, {"params", params}, {"children", children}};
    }
  }
  return {};
}

}  // namespace detail

RateFunction parse_rate_function_json(const std::string& text, const SmdpModel* model) {
  return detail::rate_function_from_json(detail::parse(text, "rate function"), model);
}

std::string serialize_rate_function_json(const RateFunction& f) {
  return detail::rate_function_to_json(f).dump();
}

}  // namespace smdp
