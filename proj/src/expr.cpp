#include "tangency/expr.hpp"

#include <fmt/format.h>

#include <cctype>
#include <charconv>
#include <utility>

namespace tangency::exprs {

NodePtr Node::make_literal(double v) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Literal;
  n->literal = v;
  return n;
}

NodePtr Node::make_variable(int index) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Variable;
  n->variable = index;
  n->constant = false;
  return n;
}

NodePtr Node::make_negate(NodePtr a) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Negate;
  n->constant = a->constant;
  n->args.push_back(std::move(a));
  return n;
}

NodePtr Node::make_binary(BinaryOp op, NodePtr a, NodePtr b) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Binary;
  n->op = op;
  n->constant = a->constant && b->constant;
  n->args = {std::move(a), std::move(b)};
  return n;
}

NodePtr Node::make_call(Function fn, std::vector<NodePtr> args) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Call;
  n->fn = fn;
  n->constant = true;
  for (const auto& a : args) n->constant = n->constant && a->constant;
  n->args = std::move(args);
  return n;
}

bool structurally_equal(const Node& a, const Node& b) {
  if (a.kind != b.kind || a.args.size() != b.args.size()) return false;
  switch (a.kind) {
    case Node::Kind::Literal:
      if (a.literal != b.literal) return false;
      break;
    case Node::Kind::Variable:
      if (a.variable != b.variable) return false;
      break;
    case Node::Kind::Binary:
      if (a.op != b.op) return false;
      break;
    case Node::Kind::Call:
      if (a.fn != b.fn) return false;
      break;
    case Node::Kind::Negate:
      break;
  }
  for (std::size_t i = 0; i < a.args.size(); ++i)
    if (!structurally_equal(*a.args[i], *b.args[i])) return false;
  return true;
}

namespace {

const char* op_symbol(BinaryOp op) {
  switch (op) {
    case BinaryOp::Add: return "+";
    case BinaryOp::Sub: return "-";
    case BinaryOp::Mul: return "*";
    case BinaryOp::Div: return "/";
    case BinaryOp::Pow: return "^";
  }
  return "?";
}

const char* fn_name(Function f) {
  switch (f) {
    case Function::Sin: return "sin";
    case Function::Cos: return "cos";
    case Function::Exp: return "exp";
    case Function::Log: return "log";
    case Function::Sqrt: return "sqrt";
    case Function::Abs: return "abs";
    case Function::Min: return "min";
    case Function::Max: return "max";
  }
  return "?";
}

const std::map<std::string, std::pair<Function, int>>& function_table() {
  static const std::map<std::string, std::pair<Function, int>> table = {
      {"sin", {Function::Sin, 1}},   {"cos", {Function::Cos, 1}}, {"exp", {Function::Exp, 1}},
      {"log", {Function::Log, 1}},   {"sqrt", {Function::Sqrt, 1}}, {"abs", {Function::Abs, 1}},
      {"min", {Function::Min, 2}},   {"max", {Function::Max, 2}},
  };
  return table;
}

class Parser {
 public:
  Parser(std::string_view text, int dim, const std::map<std::string, int>& aliases)
      : text_(text), dim_(dim), aliases_(aliases) {}

  NodePtr parse() {
    skip_ws();
    if (pos_ == text_.size()) throw ParseError("empty expression", pos_);
    NodePtr e = expr();
    skip_ws();
    if (pos_ != text_.size()) throw ParseError(fmt::format("unexpected '{}'", text_[pos_]), pos_);
    return e;
  }

 private:
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) {
      if (pos_ >= text_.size()) throw ParseError(fmt::format("expected '{}' but input ended", c), pos_);
      throw ParseError(fmt::format("expected '{}'", c), pos_);
    }
  }

  NodePtr expr() {
    NodePtr lhs = term();
    for (;;) {
      if (accept('+'))
        lhs = Node::make_binary(BinaryOp::Add, lhs, term());
      else if (accept('-'))
        lhs = Node::make_binary(BinaryOp::Sub, lhs, term());
      else
        return lhs;
    }
  }

  NodePtr term() {
    NodePtr lhs = unary();
    for (;;) {
      if (accept('*'))
        lhs = Node::make_binary(BinaryOp::Mul, lhs, unary());
      else if (accept('/'))
        lhs = Node::make_binary(BinaryOp::Div, lhs, unary());
      else
        return lhs;
    }
  }

  NodePtr unary() {
    if (accept('-')) return Node::make_negate(unary());
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    if (accept('^')) return Node::make_binary(BinaryOp::Pow, base, unary());
    return base;
  }

  NodePtr primary() {
    skip_ws();
    if (pos_ >= text_.size()) throw ParseError("unexpected end of input", pos_);
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr e = expr();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    throw ParseError(fmt::format("unexpected '{}'", c), pos_);
  }

  NodePtr number() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.')) ++pos_;
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t p = pos_ + 1;
      if (p < text_.size() && (text_[p] == '+' || text_[p] == '-')) ++p;
      if (p < text_.size() && std::isdigit(static_cast<unsigned char>(text_[p]))) {
        while (p < text_.size() && std::isdigit(static_cast<unsigned char>(text_[p]))) ++p;
        pos_ = p;
      }
    }
    double v = 0.0;
    const auto* first = text_.data() + start;
    const auto* last = text_.data() + pos_;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last) throw ParseError("malformed number", start);
    return Node::make_literal(v);
  }

  NodePtr identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    const std::string name(text_.substr(start, pos_ - start));

    if (auto it = aliases_.find(name); it != aliases_.end()) return variable(it->second, start);

    if (name.size() > 1 && name[0] == 'x' &&
        name.find_first_not_of("0123456789", 1) == std::string::npos) {
      if (name[1] == '0' && name.size() > 2) throw ParseError("malformed variable '" + name + "'", start);
      return variable(std::stoi(name.substr(1)), start);
    }

    const auto& table = function_table();
    auto it = table.find(name);
    if (it == table.end()) throw ParseError("unknown identifier '" + name + "'", start);
    expect('(');
    std::vector<NodePtr> args;
    args.push_back(expr());
    while (accept(',')) args.push_back(expr());
    const std::size_t close = pos_;
    expect(')');
    if (static_cast<int>(args.size()) != it->second.second)
      throw ParseError(fmt::format("{} expects {} argument(s), got {}", name, it->second.second, args.size()),
                       close);
    return Node::make_call(it->second.first, std::move(args));
  }

  NodePtr variable(int one_based, std::size_t at) {
    if (one_based < 1 || one_based > dim_)
      throw ParseError(fmt::format("variable x{} out of range for dimension {}", one_based, dim_), at);
    return Node::make_variable(one_based - 1);
  }

  std::string_view text_;
  int dim_;
  const std::map<std::string, int>& aliases_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string to_string(const Node& n) {
  switch (n.kind) {
    case Node::Kind::Literal:
      if (n.literal < 0) return fmt::format("(-{})", -n.literal);
      return fmt::format("{}", n.literal);
    case Node::Kind::Variable:
      return fmt::format("x{}", n.variable + 1);
    case Node::Kind::Negate:
      return "(-" + to_string(*n.args[0]) + ")";
    case Node::Kind::Binary:
      return "(" + to_string(*n.args[0]) + " " + op_symbol(n.op) + " " + to_string(*n.args[1]) + ")";
    case Node::Kind::Call: {
      std::string s = std::string(fn_name(n.fn)) + "(";
      for (std::size_t i = 0; i < n.args.size(); ++i) {
        if (i) s += ", ";
        s += to_string(*n.args[i]);
      }
      return s + ")";
    }
  }
  return "?";
}

Expr::Expr(NodePtr root, int dim) : root_(std::move(root)), dim_(dim) {
  if (!root_) throw std::invalid_argument("null expression");
  if (dim_ < 0) throw std::invalid_argument("negative dimension");
}

double Expr::eval(std::span<const double> x) const { return evaluate<double>(x); }

Expr parse(std::string_view text, int dim, const std::map<std::string, int>& aliases) {
  if (dim < 0) throw std::invalid_argument("dimension must be nonnegative");
  return Expr(Parser(text, dim, aliases).parse(), dim);
}

std::vector<double> grad(const Expr& e, std::span<const double> x) {
  const auto n = static_cast<std::size_t>(e.dim());
  if (x.size() != n) throw std::invalid_argument("gradient point has the wrong dimension");
  std::vector<DualValue> vars;
  vars.reserve(n);
  for (std::size_t i = 0; i < n; ++i) vars.push_back(DualValue::variable(x[i], i, n));
  const DualValue r = e.evaluate<DualValue>(vars);
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) g[i] = r.partial(i);
  return g;
}

namespace {

template <int K>
struct Nested {
  using type = Dual<typename Nested<K - 1>::type>;
};
template <>
struct Nested<0> {
  using type = double;
};

template <int K>
typename Nested<K>::type seed(double t) {
  if constexpr (K == 0) {
    return t;
  } else {
    using Inner = typename Nested<K - 1>::type;
    return {seed<K - 1>(t), Inner(1.0)};
  }
}

// Takes the top derivative slot repeatedly: for Nested<K> evaluated at a seeded
// variable, deriv.deriv...deriv (K times) is the K-th derivative.
template <int K>
double top(const typename Nested<K>::type& v) {
  if constexpr (K == 0)
    return v;
  else
    return top<K - 1>(v.deriv);
}

template <int K>
double nth_derivative(const Expr& e, double t) {
  using T = typename Nested<K>::type;
  T var = seed<K>(t);
  std::span<const T> xs(&var, 1);
  return top<K>(e.evaluate<T>(xs));
}

}  // namespace

double derivative(const Expr& e, double t, int order) {
  if (e.dim() != 1) throw std::invalid_argument("derivative() needs a univariate expression");
  switch (order) {
    case 0: return nth_derivative<0>(e, t);
    case 1: return nth_derivative<1>(e, t);
    case 2: return nth_derivative<2>(e, t);
    case 3: return nth_derivative<3>(e, t);
    case 4: return nth_derivative<4>(e, t);
    default: throw std::invalid_argument("derivative order must be in 0..4");
  }
}

namespace detail {
void throw_domain(const char* what, const Node& n) { throw DomainError(what, to_string(n)); }
}  // namespace detail

}  // namespace tangency::exprs
