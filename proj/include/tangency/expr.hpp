#pragma once

// Scalar expressions over variables x1..xn.
//
// Grammar (whitespace-insensitive):
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' unary)?          right-associative
//   primary := number | variable | func '(' args ')' | '(' expr ')'
// Functions: sin cos exp log sqrt abs (one argument), min max (two).
//
// Expressions are immutable and evaluate exactly as written; there is no
// simplification pass.

#include <cmath>
#include <cstddef>
#include <map>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

#include "tangency/dual.hpp"

namespace tangency::exprs {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : std::runtime_error(what + " at byte " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

/// Evaluation outside the domain of a primitive (log of a nonpositive number, ...).
class DomainError : public std::runtime_error {
 public:
  DomainError(const std::string& what, std::string subexpr)
      : std::runtime_error(what + " in " + subexpr), subexpr_(std::move(subexpr)) {}
  const std::string& subexpression() const { return subexpr_; }

 private:
  std::string subexpr_;
};

enum class BinaryOp { Add, Sub, Mul, Div, Pow };
enum class Function { Sin, Cos, Exp, Log, Sqrt, Abs, Min, Max };

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
  enum class Kind { Literal, Variable, Negate, Binary, Call };

  Kind kind = Kind::Literal;
  double literal = 0.0;
  int variable = 0;  // zero-based
  BinaryOp op = BinaryOp::Add;
  Function fn = Function::Sin;
  std::vector<NodePtr> args;
  bool constant = true;  // subtree free of variables

  static NodePtr make_literal(double v);
  static NodePtr make_variable(int index);
  static NodePtr make_negate(NodePtr a);
  static NodePtr make_binary(BinaryOp op, NodePtr a, NodePtr b);
  static NodePtr make_call(Function fn, std::vector<NodePtr> args);
};

bool structurally_equal(const Node& a, const Node& b);
std::string to_string(const Node& n);

class Expr {
 public:
  Expr() = default;
  Expr(NodePtr root, int dim);

  int dim() const { return dim_; }
  const Node& root() const { return *root_; }
  const NodePtr& root_ptr() const { return root_; }
  bool is_constant() const { return root_->constant; }

  double eval(std::span<const double> x) const;

  /// Generic evaluation over any scalar-like T (double, DualValue, Dual<...>).
  template <class T>
  T evaluate(std::span<const T> x) const;

  /// Canonical, fully parenthesized form. Re-parsing it yields an equal tree.
  std::string str() const { return to_string(*root_); }

  friend bool operator==(const Expr& a, const Expr& b) {
    return a.dim_ == b.dim_ && structurally_equal(*a.root_, *b.root_);
  }

 private:
  NodePtr root_;
  int dim_ = 0;
};

/// Parses `text` with variables x1..x{dim}. `aliases` maps extra identifiers
/// (for example "lambda") onto variable indices (one-based).
Expr parse(std::string_view text, int dim, const std::map<std::string, int>& aliases = {});

/// Exact gradient by forward-mode dual arithmetic. Throws NonDifferentiable at
/// kinks of abs/min/max, at sqrt(0) and at non-smooth powers of zero.
std::vector<double> grad(const Expr& e, std::span<const double> x);

/// k-th derivative of a univariate expression by nested dual passes (k <= 4).
double derivative(const Expr& e, double t, int order);

// ---------------------------------------------------------------------------

namespace detail {

template <class T>
constexpr bool is_plain = std::is_same_v<T, double>;

[[noreturn]] void throw_domain(const char* what, const Node& n);

template <class T>
T eval_node(const Node& n, std::span<const T> x) {
  using std::abs;
  using std::cos;
  using std::exp;
  using std::log;
  using std::sin;
  using std::sqrt;
  switch (n.kind) {
    case Node::Kind::Literal:
      return T(n.literal);
    case Node::Kind::Variable:
      return x[static_cast<std::size_t>(n.variable)];
    case Node::Kind::Negate:
      return -eval_node<T>(*n.args[0], x);
    case Node::Kind::Binary: {
      if (n.op == BinaryOp::Pow && n.args[1]->constant) {
        const T base = eval_node<T>(*n.args[0], x);
        const double c = primal(eval_node<double>(*n.args[1], std::span<const double>{}));
        const double b = primal(base);
        const bool integral = std::floor(c) == c;
        if (b < 0 && !integral) throw_domain("negative base with non-integer exponent", n);
        if (b == 0 && c < 0) throw_domain("zero raised to a negative power", n);
        if constexpr (!is_plain<T>) {
          if (b == 0 && c != 0 && c < 1) throw NonDifferentiable("power not differentiable at zero in " + to_string(n));
          if (b == 0 && !integral) throw NonDifferentiable("fractional power at zero in " + to_string(n));
        }
        if (c == 0) return T(1.0);
        return pow_const(base, c);
      }
      const T a = eval_node<T>(*n.args[0], x);
      const T b = eval_node<T>(*n.args[1], x);
      switch (n.op) {
        case BinaryOp::Add:
          return a + b;
        case BinaryOp::Sub:
          return a - b;
        case BinaryOp::Mul:
          return a * b;
        case BinaryOp::Div:
          if (primal(b) == 0) throw_domain("division by zero", n);
          return a / b;
        case BinaryOp::Pow:
          if (primal(a) <= 0) throw_domain("variable exponent requires a positive base", n);
          return exp(b * log(a));
      }
      break;
    }
    case Node::Kind::Call: {
      const T a = eval_node<T>(*n.args[0], x);
      const double pa = primal(a);
      switch (n.fn) {
        case Function::Sin:
          return sin(a);
        case Function::Cos:
          return cos(a);
        case Function::Exp:
          return exp(a);
        case Function::Log:
          if (pa <= 0) throw_domain("log of a nonpositive number", n);
          return log(a);
        case Function::Sqrt:
          if (pa < 0) throw_domain("sqrt of a negative number", n);
          if constexpr (!is_plain<T>) {
            if (pa == 0) throw NonDifferentiable("sqrt at zero in " + to_string(n));
          }
          return sqrt(a);
        case Function::Abs:
          if constexpr (!is_plain<T>) {
            if (pa == 0) throw NonDifferentiable("abs at its kink in " + to_string(n));
          }
          return abs(a);
        case Function::Min:
        case Function::Max: {
          const T b = eval_node<T>(*n.args[1], x);
          const double pb = primal(b);
          if constexpr (!is_plain<T>) {
            if (pa == pb) throw NonDifferentiable("min/max at a tie in " + to_string(n));
          }
          const bool take_a = n.fn == Function::Min ? pa < pb : pa > pb;
          return take_a ? a : b;
        }
      }
      break;
    }
  }
  throw std::logic_error("corrupt expression node");
}

}  // namespace detail

template <class T>
T Expr::evaluate(std::span<const T> x) const {
  if (static_cast<int>(x.size()) != dim_)
    throw std::invalid_argument("expression of dimension " + std::to_string(dim_) + " evaluated at a point of dimension " +
                                std::to_string(x.size()));
  return detail::eval_node<T>(*root_, x);
}

}  // namespace tangency::exprs
