#include "tangency/field.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

namespace tangency {

ScalarField ScalarField::from_expression(std::string_view text, int dim) {
  return from_expr(exprs::parse(text, dim));
}

ScalarField ScalarField::from_expr(exprs::Expr e) {
  ScalarField f;
  f.dim_ = e.dim();
  f.name_ = e.str();
  f.expr_ = std::move(e);
  return f;
}

ScalarField ScalarField::from_function(int dim, Fn fn, std::string name) {
  ScalarField f;
  f.dim_ = dim;
  f.name_ = std::move(name);
  f.fn_ = std::move(fn);
  return f;
}

namespace {

double acker_dickstein(double x, double y) {
  const double den = x * x * x * x + y * y;
  if (den == 0.0) return 0.0;
  return x * x * x * y / den;
}

const std::map<std::string, std::function<ScalarField()>>& scalar_registry() {
  static const std::map<std::string, std::function<ScalarField()>> reg = {
      {"acker_dickstein",
       [] {
         return ScalarField::from_function(
             2, [](std::span<const double> p) { return acker_dickstein(p[0], p[1]); }, "acker_dickstein");
       }},
      {"acker_dickstein_composite",
       [] {
         return ScalarField::from_function(
             2, [](std::span<const double> p) { return acker_dickstein(p[0], p[1] * p[1]); },
             "acker_dickstein_composite");
       }},
      {"h2sin",
       [] {
         return ScalarField::from_function(
             1,
             [](std::span<const double> p) {
               const double h = p[0];
               return h == 0.0 ? 0.0 : h * h * std::sin(1.0 / h);
             },
             "h2sin");
       }},
      {"exp", [] { return ScalarField::from_expression("exp(x1)", 1); }},
      {"sin", [] { return ScalarField::from_expression("sin(x1)", 1); }},
      {"square", [] { return ScalarField::from_expression("x1^2", 1); }},
      {"abs", [] { return ScalarField::from_expression("abs(x1)", 1); }},
  };
  return reg;
}

}  // namespace

ScalarField ScalarField::builtin(const std::string& name) {
  const auto& reg = scalar_registry();
  auto it = reg.find(name);
  if (it == reg.end()) throw std::invalid_argument("unknown built-in field '" + name + "'");
  ScalarField f = it->second();
  f.name_ = name;
  return f;
}

std::vector<std::string> ScalarField::builtin_names() {
  std::vector<std::string> out;
  for (const auto& [k, v] : scalar_registry()) out.push_back(k);
  return out;
}

double ScalarField::operator()(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != dim_) throw DimensionMismatch(x.size(), static_cast<std::size_t>(dim_));
  const double v = expr_ ? expr_->eval(x) : fn_(x);
  return scale_ * v;
}

std::optional<Vector> ScalarField::analytic_gradient(const Point& x) const {
  if (!expr_) return std::nullopt;
  try {
    std::vector<double> g = exprs::grad(*expr_, x.coords());
    for (auto& c : g) c *= scale_;
    Vector v(std::move(g));
    if (!v.finite()) return std::nullopt;
    return v;
  } catch (const exprs::NonDifferentiable&) {
    return std::nullopt;
  } catch (const exprs::DomainError&) {
    return std::nullopt;
  }
}

ScalarField ScalarField::scaled(double s) const {
  ScalarField f = *this;
  f.scale_ *= s;
  if (s == -1.0)
    f.name_ = "-(" + name_ + ")";
  else if (s != 1.0)
    f.name_ = std::to_string(s) + "*(" + name_ + ")";
  return f;
}

// ---------------------------------------------------------------------------

Curve::Curve(std::vector<exprs::Expr> components, std::string name)
    : comps_(std::move(components)), name_(std::move(name)) {
  if (comps_.empty()) throw std::invalid_argument("curve needs at least one component");
  for (const auto& c : comps_)
    if (c.dim() != 1) throw std::invalid_argument("curve components must be univariate");
}

Curve Curve::from_expressions(const std::vector<std::string>& texts) {
  std::vector<exprs::Expr> comps;
  std::string name = "(";
  for (std::size_t i = 0; i < texts.size(); ++i) {
    comps.push_back(exprs::parse(texts[i], 1, {{"t", 1}}));
    name += (i ? ", " : "") + texts[i];
  }
  return Curve(std::move(comps), name + ")");
}

namespace {

const std::map<std::string, std::vector<std::string>>& curve_registry() {
  static const std::map<std::string, std::vector<std::string>> reg = {
      {"circle", {"cos(t)", "sin(t)"}},
      {"poly23", {"t^2", "t^3"}},
      {"helix", {"cos(t)", "sin(t)", "t"}},
      {"linear", {"1 + 2*t", "3 - t"}},
      {"exp_pair", {"exp(t)", "exp(-t)"}},
      {"lissajous", {"sin(2*t)", "cos(3*t)"}},
  };
  return reg;
}

}  // namespace

Curve Curve::builtin(const std::string& name) {
  auto it = curve_registry().find(name);
  if (it == curve_registry().end()) throw std::invalid_argument("unknown built-in curve '" + name + "'");
  Curve c = from_expressions(it->second);
  c.name_ = name;
  return c;
}

std::vector<std::string> Curve::builtin_names() {
  std::vector<std::string> out;
  for (const auto& [k, v] : curve_registry()) out.push_back(k);
  return out;
}

Vector Curve::derivative(double t, int order) const {
  Vector v(comps_.size());
  for (std::size_t i = 0; i < comps_.size(); ++i) v[i] = exprs::derivative(comps_[i], t, order);
  return v;
}

}  // namespace tangency
