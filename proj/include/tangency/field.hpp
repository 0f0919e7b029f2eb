#pragma once

// Real functions of n variables and curves R -> R^m, backed either by a
// parsed expression or by a registered built-in.

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tangency/expr.hpp"
#include "tangency/geometry.hpp"

namespace tangency {

enum class GradMode { Analytic, FiniteDifference };

class ScalarField {
 public:
  using Fn = std::function<double(std::span<const double>)>;

  static ScalarField from_expression(std::string_view text, int dim);
  static ScalarField from_expr(exprs::Expr e);
  static ScalarField from_function(int dim, Fn f, std::string name);
  /// Registered built-ins; throws std::invalid_argument for unknown names.
  static ScalarField builtin(const std::string& name);
  static std::vector<std::string> builtin_names();

  int dim() const { return dim_; }
  const std::string& name() const { return name_; }
  const std::optional<exprs::Expr>& expr() const { return expr_; }

  double operator()(std::span<const double> x) const;
  double operator()(const Point& x) const { return (*this)(x.coords()); }

  /// Analytic gradient when the expression is differentiable at x.
  std::optional<Vector> analytic_gradient(const Point& x) const;
  /// Analytic when possible at x, finite differences otherwise.
  GradMode grad_mode(const Point& x) const { return analytic_gradient(x) ? GradMode::Analytic : GradMode::FiniteDifference; }

  ScalarField scaled(double s) const;
  ScalarField negated() const { return scaled(-1.0); }

 private:
  int dim_ = 0;
  std::string name_;
  std::optional<exprs::Expr> expr_;
  Fn fn_;
  double scale_ = 1.0;
};

/// Curve t -> (f_1(t), ..., f_m(t)) given by univariate expressions, so that
/// derivatives of every order up to 4 come from nested dual numbers.
class Curve {
 public:
  explicit Curve(std::vector<exprs::Expr> components, std::string name = "");
  static Curve from_expressions(const std::vector<std::string>& texts);
  static Curve builtin(const std::string& name);
  static std::vector<std::string> builtin_names();

  std::size_t dim() const { return comps_.size(); }
  const std::string& name() const { return name_; }
  Vector operator()(double t) const { return derivative(t, 0); }
  Vector derivative(double t, int order) const;

 private:
  std::vector<exprs::Expr> comps_;
  std::string name_;
};

}  // namespace tangency
