#pragma once

// Forward-mode dual numbers.
//
// DualValue carries a value and a dense gradient (one partial per variable).
// Dual<T> carries a single directional derivative and nests, so
// Dual<Dual<double>> yields second derivatives of univariate maps, and so on.

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace tangency::exprs {

/// Raised when a primitive has no classical derivative at the evaluation point.
class NonDifferentiable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DualValue {
 public:
  DualValue() = default;
  DualValue(double value) : value_(value) {}  // NOLINT: constants promote implicitly
  DualValue(double value, std::vector<double> partials)
      : value_(value), partials_(std::move(partials)) {}

  /// The i-th coordinate function: value x, partials e_i.
  static DualValue variable(double x, std::size_t index, std::size_t dim) {
    std::vector<double> p(dim, 0.0);
    p.at(index) = 1.0;
    return {x, std::move(p)};
  }

  double value() const { return value_; }
  /// Empty partials denote a constant.
  const std::vector<double>& partials() const { return partials_; }
  double partial(std::size_t i) const { return i < partials_.size() ? partials_[i] : 0.0; }

  friend DualValue operator+(const DualValue& a, const DualValue& b) {
    return {a.value_ + b.value_, combine(a.partials_, 1.0, b.partials_, 1.0)};
  }
  friend DualValue operator-(const DualValue& a, const DualValue& b) {
    return {a.value_ - b.value_, combine(a.partials_, 1.0, b.partials_, -1.0)};
  }
  friend DualValue operator*(const DualValue& a, const DualValue& b) {
    return {a.value_ * b.value_, combine(a.partials_, b.value_, b.partials_, a.value_)};
  }
  friend DualValue operator/(const DualValue& a, const DualValue& b) {
    const double q = a.value_ / b.value_;
    return {q, combine(a.partials_, 1.0 / b.value_, b.partials_, -q / b.value_)};
  }
  friend DualValue operator-(const DualValue& a) { return a.scaled(-1.0, -a.value_); }

  /// Chain rule for a scalar primitive g: returns (g(value), g'(value) * partials).
  DualValue scaled(double derivative, double new_value) const {
    std::vector<double> p(partials_.size());
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = derivative * partials_[i];
    return {new_value, std::move(p)};
  }

 private:
  static std::vector<double> combine(const std::vector<double>& a, double wa,
                                     const std::vector<double>& b, double wb) {
    std::vector<double> out(std::max(a.size(), b.size()), 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) out[i] += wa * a[i];
    for (std::size_t i = 0; i < b.size(); ++i) out[i] += wb * b[i];
    return out;
  }

  double value_ = 0.0;
  std::vector<double> partials_;
};

template <class T>
struct Dual {
  T value{};
  T deriv{};

  Dual() = default;
  Dual(double c) : value(c), deriv(0.0) {}  // NOLINT
  Dual(T v, T d) : value(std::move(v)), deriv(std::move(d)) {}

  friend Dual operator+(const Dual& a, const Dual& b) { return {a.value + b.value, a.deriv + b.deriv}; }
  friend Dual operator-(const Dual& a, const Dual& b) { return {a.value - b.value, a.deriv - b.deriv}; }
  friend Dual operator*(const Dual& a, const Dual& b) {
    return {a.value * b.value, a.deriv * b.value + a.value * b.deriv};
  }
  friend Dual operator/(const Dual& a, const Dual& b) {
    T q = a.value / b.value;
    return {q, (a.deriv - q * b.deriv) / b.value};
  }
  friend Dual operator-(const Dual& a) { return {-a.value, -a.deriv}; }
};

inline double primal(double x) { return x; }
inline double primal(const DualValue& x) { return x.value(); }
template <class T>
double primal(const Dual<T>& x) {
  return primal(x.value);
}

// Elementary functions. Each takes the already-validated argument; domain and
// kink checks happen in the evaluator, which knows the offending subexpression.

inline DualValue sin(const DualValue& x) { return x.scaled(std::cos(x.value()), std::sin(x.value())); }
inline DualValue cos(const DualValue& x) { return x.scaled(-std::sin(x.value()), std::cos(x.value())); }
inline DualValue exp(const DualValue& x) {
  const double e = std::exp(x.value());
  return x.scaled(e, e);
}
inline DualValue log(const DualValue& x) { return x.scaled(1.0 / x.value(), std::log(x.value())); }
inline DualValue sqrt(const DualValue& x) {
  const double s = std::sqrt(x.value());
  return x.scaled(0.5 / s, s);
}
inline DualValue abs(const DualValue& x) { return x.value() < 0 ? -x : x; }
inline DualValue pow_const(const DualValue& x, double c) {
  return x.scaled(c * std::pow(x.value(), c - 1.0), std::pow(x.value(), c));
}

template <class T>
Dual<T> sin(const Dual<T>& x) {
  using std::cos;
  using std::sin;
  return {sin(x.value), cos(x.value) * x.deriv};
}
template <class T>
Dual<T> cos(const Dual<T>& x) {
  using std::cos;
  using std::sin;
  return {cos(x.value), -(sin(x.value) * x.deriv)};
}
template <class T>
Dual<T> exp(const Dual<T>& x) {
  using std::exp;
  T e = exp(x.value);
  return {e, e * x.deriv};
}
template <class T>
Dual<T> log(const Dual<T>& x) {
  using std::log;
  return {log(x.value), x.deriv / x.value};
}
template <class T>
Dual<T> sqrt(const Dual<T>& x) {
  using std::sqrt;
  T s = sqrt(x.value);
  return {s, x.deriv / (T(2.0) * s)};
}
template <class T>
Dual<T> abs(const Dual<T>& x) {
  return primal(x) < 0 ? -x : x;
}

inline double pow_const(double x, double c) { return std::pow(x, c); }

template <class T>
Dual<T> pow_const(const Dual<T>& x, double c) {
  return {pow_const(x.value, c), T(c) * pow_const(x.value, c - 1.0) * x.deriv};
}

}  // namespace tangency::exprs
