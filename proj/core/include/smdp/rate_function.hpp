#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace smdp {

class SmdpModel;

enum class RateKind {
  Affine,
  MaxOverSubset,
  MinOverSubset,
  Composite,
  Example2D,
  ReferencePair,
};

enum class Combinator { WeightedSum, Max, Min };

/// Whether a constructor enforces the family's SISTr preconditions.
enum class Validation { Enforce, Skip };

/// Estimator f: R^d -> R of the optimal reward rate. Immutable value type
/// backed by a shared node tree; copies are cheap.
///
/// Families:
///   affine         f(x) = b + theta^T x,           sum(theta) > 0
///   max / min      f(x) = b + beta * max/min_{i in D} x_i,  beta > 0
///   composite      psi(g_1(x), ..., g_m(x)), psi in {weighted sum (w > 0), max, min}
///   example_2d     piecewise function on R^2 whose scaling limit is SISTr
///                  only at the origin
///   reference_pair (r_{sa} + sum_s' p max q(s', .) - q(s, a)) / t_{sa} for a
///                  fixed pair; translation invariant, hence NOT SISTr; only
///                  meaningful for the exact relative value iteration
class RateFunction {
 public:
  static RateFunction affine(double b, std::vector<double> theta,
                             Validation v = Validation::Enforce);
  /// Affine with theta = 1/d: the plain average of all components.
  static RateFunction mean(std::size_t dim);
  static RateFunction max_over(std::size_t dim, double b, double beta,
                               std::vector<std::size_t> subset);
  static RateFunction min_over(std::size_t dim, double b, double beta,
                               std::vector<std::size_t> subset);
  static RateFunction composite(Combinator psi, std::vector<RateFunction> children,
                                std::vector<double> weights = {});
  static RateFunction example_2d();
  static RateFunction reference_pair(const SmdpModel& model, std::size_t pair);

  RateKind kind() const noexcept;
  std::size_t dim() const noexcept;
  /// Upper bound on the sup-norm Lipschitz constant.
  double lipschitz_bound() const noexcept;
  /// False only for reference_pair (and for skip-validated degenerate members).
  bool sistr_by_construction() const noexcept;

  double operator()(std::span<const double> x) const { return eval(x); }
  double eval(std::span<const double> x) const;
  double eval_scaling_limit(std::span<const double> x) const;

  // Accessors used by serialisation.
  double offset() const noexcept;
  double scale() const noexcept;
  const std::vector<double>& theta() const noexcept;
  const std::vector<std::size_t>& subset() const noexcept;
  Combinator combinator() const noexcept;
  const std::vector<double>& weights() const noexcept;
  const std::vector<RateFunction>& children() const noexcept;
  std::size_t reference() const noexcept;

  struct Node;

 private:
  explicit RateFunction(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

double eval(const RateFunction& f, std::span<const double> x);
double eval_scaling_limit(const RateFunction& f, std::span<const double> x);

struct TranslationOptions {
  double tol = 1e-10;
  double initial_half_width = 1.0;
  double expansion_factor = 2.0;
  double bracket_bound = 1e9;
  int max_bisections = 400;
};

/// Unique c with |f(x + c 1) - level| <= tol. Brackets by doubling, then
/// bisects. Throws ContractViolation when the bracket cannot be closed within
/// the bound, i.e. c -> f(x + c) does not cross the level.
double solve_translation(const RateFunction& f, std::span<const double> x,
                         double level, const TranslationOptions& opts = {});
double solve_translation(const RateFunction& f, std::span<const double> x,
                         double level, double tol);

struct SistrWitness {
  std::vector<double> x;
  double c_low;
  double c_high;
  double f_low;
  double f_high;
  std::string reason;
};

struct SistrReport {
  bool pass = true;
  std::vector<SistrWitness> witnesses;
};

/// Sampled SISTr diagnostic: strict increase of c -> f(x + c) on c_grid at
/// every probe, plus growth past +-1 at translations up to 1e9.
/// With scaling_limit = true the check runs on f_infinity instead of f.
SistrReport check_sistr(const RateFunction& f,
                        std::span<const std::vector<double>> probe_points,
                        std::span<const double> c_grid, bool scaling_limit = false);

/// {"kind": ..., "params": {...}, "children": [...]}; see the README for the
/// accepted kinds. `model` is needed only to resolve reference_pair.
RateFunction parse_rate_function_json(const std::string& text,
                                      const SmdpModel* model = nullptr);
std::string serialize_rate_function_json(const RateFunction& f);

}  // namespace smdp
