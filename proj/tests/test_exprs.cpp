#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <random>

#include "tangency/expr.hpp"

using namespace tangency::exprs;

namespace {

// Central difference with one Richardson level, written independently of the
// dual-number path.
std::vector<double> fd_gradient(const Expr& e, std::vector<double> x) {
  std::vector<double> g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double h = 1e-3 * (1.0 + std::abs(x[i]));
    auto central = [&](double step) {
      auto xp = x;
      auto xm = x;
      xp[i] += step;
      xm[i] -= step;
      return (e.eval(xp) - e.eval(xm)) / (2.0 * step);
    };
    const double d1 = central(h);
    const double d2 = central(h / 2);
    const double r1 = (4.0 * d2 - d1) / 3.0;
    const double d3 = central(h / 4);
    const double r2 = (4.0 * d3 - d2) / 3.0;
    g[i] = (16.0 * r2 - r1) / 15.0;
  }
  return g;
}

NodePtr random_polynomial_term(std::mt19937_64& rng, int dim, int degree) {
  std::uniform_real_distribution<double> coef(0.1, 2.0);
  std::uniform_int_distribution<int> var(0, dim - 1);
  NodePtr term = Node::make_literal(std::round(coef(rng) * 100) / 100);
  for (int d = 0; d < degree; ++d) term = Node::make_binary(BinaryOp::Mul, term, Node::make_variable(var(rng)));
  return term;
}

Expr random_polynomial(std::mt19937_64& rng, int dim) {
  std::uniform_int_distribution<int> nterms(1, 6);
  std::uniform_int_distribution<int> deg(0, 4);
  std::bernoulli_distribution sub(0.3);
  NodePtr p = random_polynomial_term(rng, dim, deg(rng));
  const int n = nterms(rng);
  for (int i = 1; i < n; ++i)
    p = Node::make_binary(sub(rng) ? BinaryOp::Sub : BinaryOp::Add, p, random_polynomial_term(rng, dim, deg(rng)));
  return Expr(p, dim);
}

NodePtr random_tree(std::mt19937_64& rng, int dim, int depth) {
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 1 : 5);
  std::uniform_int_distribution<int> var(0, dim - 1);
  std::uniform_real_distribution<double> lit(0.0, 10.0);
  switch (pick(rng)) {
    case 0:
      return Node::make_literal(lit(rng));
    case 1:
      return Node::make_variable(var(rng));
    case 2:
      return Node::make_negate(random_tree(rng, dim, depth - 1));
    case 3: {
      std::uniform_int_distribution<int> op(0, 4);
      return Node::make_binary(static_cast<BinaryOp>(op(rng)), random_tree(rng, dim, depth - 1),
                               random_tree(rng, dim, depth - 1));
    }
    default: {
      std::uniform_int_distribution<int> fn(0, 7);
      auto f = static_cast<Function>(fn(rng));
      std::vector<NodePtr> args{random_tree(rng, dim, depth - 1)};
      if (f == Function::Min || f == Function::Max) args.push_back(random_tree(rng, dim, depth - 1));
      return Node::make_call(f, std::move(args));
    }
  }
}

}  // namespace

TEST(Parse, SingleVariable) {
  const Expr e = parse("x1", 1);
  EXPECT_EQ(e.root().kind, Node::Kind::Variable);
  EXPECT_EQ(e.root().variable, 0);
}

TEST(Parse, PrecedenceMultiplicationBeforeAddition) {
  const Expr e = parse("x1 + x2*x2", 2);
  const Expr expected(Node::make_binary(BinaryOp::Add, Node::make_variable(0),
                                        Node::make_binary(BinaryOp::Mul, Node::make_variable(1), Node::make_variable(1))),
                      2);
  EXPECT_EQ(e, expected);
}

TEST(Parse, AckerDicksteinQuotient) {
  const Expr e = parse("x1^3*x2/(x1^4 + x2^2)", 2);
  EXPECT_EQ(e.str(), "(((x1 ^ 3) * x2) / ((x1 ^ 4) + (x2 ^ 2)))");
}

TEST(Parse, PowerIsRightAssociativeAndBindsTighterThanUnaryMinus) {
  EXPECT_EQ(parse("x1^2^3", 1).str(), "(x1 ^ (2 ^ 3))");
  EXPECT_EQ(parse("-x1^2", 1).str(), "(-(x1 ^ 2))");
  EXPECT_EQ(parse("2^-x1", 1).str(), "(2 ^ (-x1))");
  EXPECT_DOUBLE_EQ(parse("-2^2", 0).eval({}), -4.0);
  EXPECT_DOUBLE_EQ(parse("2^3^2", 0).eval({}), 512.0);
}

TEST(Parse, WhitespaceInsensitive) {
  EXPECT_EQ(parse("  x1*  x2 +sin( x1 )", 2), parse("x1*x2+sin(x1)", 2));
}

TEST(Parse, ErrorsCarryByteOffsets) {
  try {
    parse("x1 + * x2", 2);
    FAIL();
  } catch (const ParseError& err) {
    EXPECT_EQ(err.offset(), 5u);
  }
  try {
    parse("x1 + foo(x2)", 2);
    FAIL();
  } catch (const ParseError& err) {
    EXPECT_EQ(err.offset(), 5u);
    EXPECT_NE(std::string(err.what()).find("unknown identifier"), std::string::npos);
  }
  EXPECT_THROW(parse("x3", 2), ParseError);
  EXPECT_THROW(parse("", 2), ParseError);
  EXPECT_THROW(parse("(x1", 1), ParseError);
  EXPECT_THROW(parse("min(x1)", 1), ParseError);
  EXPECT_THROW(parse("x0", 1), ParseError);
}

TEST(Parse, Aliases) {
  const Expr e = parse("1 + 1/lambda", 1, {{"lambda", 1}});
  const double x[] = {4.0};
  EXPECT_DOUBLE_EQ(e.eval(x), 1.25);
}

TEST(Eval, Basics) {
  const double p[] = {1.0, 2.0};
  EXPECT_EQ(parse("x1+x2", 2).eval(p), 3.0);
  const double z[] = {0.0};
  EXPECT_EQ(parse("sin(x1)", 1).eval(z), 0.0);
}

TEST(Eval, AckerDicksteinAtOneOne) {
  const Expr e = parse("x1^3*x2/(x1^4 + x2^2)", 2);
  auto independent = [](double x, double y) { return x * x * x * y / (x * x * x * x + y * y); };
  const double p[] = {1.0, 1.0};
  EXPECT_DOUBLE_EQ(e.eval(p), 0.5);
  EXPECT_DOUBLE_EQ(e.eval(p), independent(1.0, 1.0));
}

TEST(Eval, DomainErrorsNameTheSubexpression) {
  const double p[] = {-1.0};
  try {
    parse("1 + log(x1)", 1).eval(p);
    FAIL();
  } catch (const DomainError& err) {
    EXPECT_EQ(err.subexpression(), "log(x1)");
  }
  EXPECT_THROW(parse("sqrt(x1)", 1).eval(p), DomainError);
  const double z[] = {0.0};
  EXPECT_THROW(parse("1/x1", 1).eval(z), DomainError);
  EXPECT_THROW(parse("x1^0.5", 1).eval(p), DomainError);
  EXPECT_DOUBLE_EQ(parse("x1^3", 1).eval(p), -1.0);
}

TEST(Eval, IsPure) {
  std::mt19937_64 rng(11);
  const Expr e = parse("sin(x1)*exp(x2) + sqrt(abs(x1*x2)+1)/(1+x1^2)", 2);
  std::uniform_real_distribution<double> u(-3, 3);
  for (int i = 0; i < 100; ++i) {
    const double p[] = {u(rng), u(rng)};
    const double a = e.eval(p);
    const double b = e.eval(p);
    EXPECT_EQ(std::memcmp(&a, &b, sizeof a), 0);
  }
}

TEST(Grad, ProductAndIdentity) {
  const double p[] = {2.0, 3.0};
  EXPECT_EQ(grad(parse("x1*x2", 2), p), (std::vector<double>{3.0, 2.0}));
  const double q[] = {0.3, -7.0, 2.0};
  EXPECT_EQ(grad(parse("x1", 3), q), (std::vector<double>{1.0, 0.0, 0.0}));
}

TEST(Grad, SumOfSquaresMatchesCentralDifferences) {
  const Expr e = parse("x1^2+x2^2", 2);
  const double p[] = {1.0, 1.0};
  const auto g = grad(e, p);
  const auto fd = fd_gradient(e, {1.0, 1.0});
  ASSERT_EQ(g.size(), 2u);
  for (int i = 0; i < 2; ++i) {
    EXPECT_NEAR(fd[i], 2.0, 1e-8);
    EXPECT_NEAR(g[i], fd[i], 1e-8);
  }
}

TEST(Grad, RefusesKinks) {
  const double z[] = {0.0, 0.0};
  EXPECT_THROW(grad(parse("abs(x1)", 2), z), NonDifferentiable);
  EXPECT_THROW(grad(parse("max(x1, x2)", 2), z), NonDifferentiable);
  EXPECT_THROW(grad(parse("sqrt(x1)", 2), z), NonDifferentiable);
  const double q[] = {0.5, 0.0};
  EXPECT_EQ(grad(parse("abs(x1) + max(x1, x2)", 2), q), (std::vector<double>{2.0, 0.0}));
}

TEST(Grad, RandomPolynomialsAgreeWithRichardsonDifferences) {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> dims(1, 4);
  std::uniform_real_distribution<double> coord(-1.5, 1.5);
  int checked = 0;
  for (int trial = 0; trial < 40; ++trial) {
    const int dim = dims(rng);
    const Expr e = random_polynomial(rng, dim);
    for (int k = 0; k < 100; ++k) {
      std::vector<double> x(static_cast<std::size_t>(dim));
      for (auto& c : x) c = coord(rng);
      const auto g = grad(e, x);
      const auto fd = fd_gradient(e, x);
      double gn = 0.0;
      for (double c : g) gn += c * c;
      gn = std::sqrt(gn);
      for (std::size_t i = 0; i < g.size(); ++i) ASSERT_LE(std::abs(g[i] - fd[i]), 1e-6 * (1.0 + gn)) << e.str();
      ++checked;
    }
  }
  EXPECT_EQ(checked, 4000);
}

TEST(Print, RoundTripIsIdempotentOnRandomTrees) {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> dims(1, 4);
  for (int i = 0; i < 1000; ++i) {
    const int dim = dims(rng);
    const Expr random(random_tree(rng, dim, 5), dim);
    const Expr once = parse(random.str(), dim);
    const Expr twice = parse(once.str(), dim);
    ASSERT_EQ(once, twice) << random.str();
    ASSERT_EQ(once.str(), twice.str());
  }
}

TEST(Derivative, NestedDualsGiveHigherDerivatives) {
  const Expr e = parse("sin(x1)*x1^3", 1);
  const double t = 0.7;
  // d/dt (t^3 sin t) = 3t^2 sin t + t^3 cos t
  EXPECT_NEAR(derivative(e, t, 1), 3 * t * t * std::sin(t) + t * t * t * std::cos(t), 1e-13);
  // second: 6t sin t + 6t^2 cos t - t^3 sin t
  EXPECT_NEAR(derivative(e, t, 2), 6 * t * std::sin(t) + 6 * t * t * std::cos(t) - t * t * t * std::sin(t), 1e-12);
  // third: 6 sin t + 18 t cos t - 9 t^2 sin t - t^3 cos t
  EXPECT_NEAR(derivative(e, t, 3),
              6 * std::sin(t) + 18 * t * std::cos(t) - 9 * t * t * std::sin(t) - t * t * t * std::cos(t), 1e-12);
  EXPECT_NEAR(derivative(parse("exp(2*x1)", 1), 0.0, 4), 16.0, 1e-12);
}
