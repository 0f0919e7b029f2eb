#pragma once

// Derivative notions for real functions: Frechet residual checks, Grassmann
// directional differentials, Peano derivatives of order n, strict
// derivatives, linearity of sampled maps and the mean-value certificate.

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "tangency/field.hpp"
#include "tangency/report.hpp"

namespace tangency::calculus {

/// A field evaluation returned a non-finite value.
class EvaluationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Difference quotients that do not settle; carries the (q, quotient) trace.
class NonConvergent : public std::runtime_error {
 public:
  NonConvergent(const std::string& what, std::vector<std::pair<double, double>> trace)
      : std::runtime_error(what), trace_(std::move(trace)) {}
  const std::vector<std::pair<double, double>>& trace() const { return trace_; }

 private:
  std::vector<std::pair<double, double>> trace_;
};

class NoPeanoDerivative : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Analytic gradient when available, else central differences with one
/// Richardson level from h0 = cbrt(eps) (1 + |x_i|).
Vector estimate_gradient(const ScalarField& f, const Point& x);

struct ResidualPoint {
  double radius = 0.0;
  double residual = 0.0;  // max over directions of |f(y) - f(x) - <Df, y-x>| / |y-x|
  double noise = 0.0;     // rounding allowance at this radius
  Vector direction;       // direction attaining the maximum
};

struct DiffReport {
  Verdict verdict = Verdict::Fail;
  std::string message;
  Vector df;
  std::vector<ResidualPoint> curve;
  std::optional<std::vector<double>> coeffs;
  double tol = 0.0;
  std::optional<ResidualPoint> witness;
};

/// 1e-1, 1e-2, ..., 1e-8.
std::vector<double> default_radii();

DiffReport check_frechet(const ScalarField& f, const Vector& df, const Point& x,
                         const std::vector<double>& radii = default_radii(), double tol = 1e-4,
                         std::size_t directions = 64);

struct Directional {
  double value = 0.0;  // two-sided value; NaN when the one-sided limits differ
  double forward = 0.0;
  double backward = 0.0;
  bool two_sided = true;
  std::vector<std::pair<double, double>> trace;  // (q, quotient), q = +-2^-k
};

/// Limit of (f(x + q v) - f(x)) / q on q = +-2^-k, k = 4..24.
Directional directional_differential(const ScalarField& f, const Point& x, const Vector& v);
/// Component-wise version for maps R^n -> R^m; throws NonConvergent unless
/// every component has a two-sided limit.
Vector directional_differential(const std::vector<ScalarField>& f, const Point& x, const Vector& v);

struct ChainRuleRow {
  Vector direction;
  double composite = 0.0;   // d(f o g)(0)(v)
  double chain_rule = 0.0;  // df(g(0))(dg(0)(v))
  double discrepancy = 0.0;
};

/// f(x,y) = x^3 y / (x^4 + y^2), g(x,y) = (x, y^2).
ChainRuleRow chain_rule_row(const Vector& v);
/// PASS when the discrepancy along (1,1) exceeds 0.4 while both axes agree.
Report chain_rule_counterexample();

struct PeanoResult {
  double value = 0.0;           // n! a_n
  std::vector<double> coeffs;   // a_0 .. a_n
  double residual = 0.0;        // normalized residual at the smallest retained scale
  double smallest_scale = 0.0;
};

/// Fits a polynomial to f(x+h) on h = +-2^(-k/4), k = 16..80 (scales above the
/// rounding floor only) and checks max |f(x+h) - P(h)| / |h|^n <= 1e-3 at
/// the smallest retained scale. Throws NoPeanoDerivative otherwise.
PeanoResult peano_derivative(const ScalarField& f, double x, int n);

/// Quotients (f(b) - f(a)) / (b - a) over shrinking windows around x.
Report strict_derivative_check(const ScalarField& f, double x, double tol = 1e-3, std::uint64_t seed = 1);

using Map = std::function<Vector(const Vector&)>;

/// Additivity and homogeneity on random inputs plus an operator-norm estimate.
Report check_linear(const Map& m, std::size_t dim, double tol = 1e-9, std::size_t samples = 200,
                    std::uint64_t seed = 1);

/// k = (n+1)!/h^(n+1) (f(t+h) - sum_{j<=n} h^j/j! f^(j)(t)) against the convex
/// hull of f^(n+1) sampled on [t, t+h].
Report mean_value_certificate(const Curve& f, double t, double h, int n, std::size_t samples = 2000);

}  // namespace tangency::calculus
