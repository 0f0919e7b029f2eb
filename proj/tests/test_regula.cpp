#include "tangency/regula.hpp"

#include <gtest/gtest.h>

#include <chrono>
#include <cmath>
#include <random>

#include "cone_suite.hpp"
#include "regula_suite.hpp"
#include "tangency/calculus.hpp"

using namespace tangency;
using namespace tangency::regula;
using tangency::sets::SetRep;

namespace {

ScalarField field(const std::string& text, int dim) { return ScalarField::from_expression(text, dim); }

const SetRep& unit_square() {
  static const SetRep s = SetRep::box(Point{0, 0}, Point{1, 1});
  return s;
}

cones::BlowUpParams sampled() {
  cones::BlowUpParams p;
  p.force_sampled = true;
  return p;
}

}  // namespace

TEST(Regula, SquareCornerOppositeTheGradientIsSatisfied) {
  const RegulaCertificate c = check_regula(field("x1+x2", 2), unit_square(), Point{1, 1}, Mode::Max);
  EXPECT_EQ(c.verdict, Verdict::Pass) << c.note;
  EXPECT_NEAR(c.worst_value, 0.0, 1e-12);
  // The worst generator is orthogonal to the gradient: (0,-1) or (-1,0).
  EXPECT_NEAR(std::abs(c.worst_direction[0]) + std::abs(c.worst_direction[1]), 1.0, 1e-12);
  EXPECT_LE(c.worst_direction[0] + c.worst_direction[1], 0.0);
  EXPECT_TRUE(c.analytic_gradient);
  EXPECT_NEAR(c.slack, 1e-6 * (1 + std::sqrt(2.0)), 1e-15);
}

TEST(Regula, SquareOriginIsViolatedAlongTheDiagonal) {
  const RegulaCertificate c = check_regula(field("x1+x2", 2), unit_square(), Point{0, 0}, Mode::Max);
  EXPECT_EQ(c.verdict, Verdict::Fail);
  EXPECT_NEAR(c.worst_value, std::sqrt(2.0), 1e-9);
  EXPECT_NEAR(c.worst_direction[0], 1 / std::sqrt(2.0), 1e-9);
  EXPECT_NEAR(c.worst_direction[1], 1 / std::sqrt(2.0), 1e-9);
  EXPECT_NEAR(c.worst_direction.norm(), 1.0, 1e-12);
}

TEST(Regula, BallBoundaryPointIsSatisfied) {
  for (const cones::BlowUpParams& p : {cones::BlowUpParams{}, sampled()}) {
    const RegulaCertificate c = check_regula(field("x1", 2), SetRep::ball(Point{0, 0}, 1.0), Point{1, 0}, Mode::Max, p);
    EXPECT_EQ(c.verdict, Verdict::Pass) << c.note;
    EXPECT_NEAR(c.worst_value, 0.0, 1e-2);
    EXPECT_NEAR(std::abs(c.worst_direction[1]), 1.0, 1e-3);
  }
  const RegulaCertificate far_side =
      check_regula(field("x1", 2), SetRep::ball(Point{0, 0}, 1.0), Point{-1, 0}, Mode::Max, sampled());
  EXPECT_EQ(far_side.verdict, Verdict::Fail);
}

TEST(Regula, MinimumOfSquaredNormAtCorner) {
  const RegulaCertificate c = check_regula(field("x1^2+x2^2", 2), unit_square(), Point{0, 0}, Mode::Min);
  EXPECT_EQ(c.verdict, Verdict::Pass);
  EXPECT_NEAR(c.gradient.norm(), 0.0, 1e-15);
}

TEST(Regula, CuspRays) {
  const SetRep cusp = suite::cusp();
  EXPECT_EQ(check_regula(field("x2", 2), cusp, Point{0, 0}, Mode::Min).verdict, Verdict::Pass);
  const RegulaCertificate c = check_regula(field("x1", 2), cusp, Point{0, 0}, Mode::Max);
  EXPECT_EQ(c.verdict, Verdict::Fail);
  EXPECT_NEAR(c.worst_value, 1 / std::sqrt(2.0), 2e-2);
}

TEST(Regula, InteriorPoints) {
  const RegulaCertificate lin = check_regula(field("x1-3*x2", 2), unit_square(), Point{0.5, 0.5}, Mode::Max);
  EXPECT_EQ(lin.verdict, Verdict::Fail);
  EXPECT_NEAR(lin.worst_value, std::sqrt(10.0), 1e-9);

  const RegulaCertificate stat =
      check_regula(field("(x1-0.5)^2+(x2-0.5)^2", 2), unit_square(), Point{0.5, 0.5}, Mode::Max);
  EXPECT_EQ(stat.verdict, Verdict::Pass);
  EXPECT_LE(stat.gradient.norm(), stat.slack);
}

TEST(Regula, InteriorStationarityIsForcedBySatisfiedVerdicts) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.1, 0.9);
  for (int i = 0; i < 30; ++i) {
    const Point x{u(rng), u(rng)};
    const RegulaCertificate c = check_regula(field("sin(3*x1)*cos(2*x2)", 2), unit_square(), x, Mode::Max);
    if (c.verdict == Verdict::Pass) EXPECT_LE(c.gradient.norm(), c.slack);
  }
}

TEST(Regula, NonDifferentiableObjectiveIsInconclusive) {
  const RegulaCertificate c =
      check_regula(field("abs(x1)", 2), SetRep::box(Point{-1, -1}, Point{1, 1}), Point{0, 0}, Mode::Max);
  EXPECT_EQ(c.verdict, Verdict::Inconclusive);
}

TEST(Regula, InconclusiveConePropagates) {
  cones::BlowUpParams p = sampled();
  p.distance_tol = 1e-300;
  const RegulaCertificate c = check_regula(field("x1", 2), SetRep::ball(Point{0, 0}, 1.0), Point{1, 0}, Mode::Max, p);
  EXPECT_EQ(c.verdict, Verdict::Inconclusive);
  EXPECT_EQ(c.to_report().verdict, Verdict::Inconclusive);
}

TEST(Regula, PointFarFromTheSetThrows) {
  EXPECT_THROW(check_regula(field("x1", 2), unit_square(), Point{2, 2}, Mode::Max), FarFromSet);
}

TEST(Regula, ReportCarriesTheCertificate) {
  const Report r = check_regula(field("x1+x2", 2), unit_square(), Point{0, 0}, Mode::Max).to_report();
  EXPECT_EQ(r.verdict, Verdict::Fail);
  ASSERT_EQ(r.checks.size(), 3u);
  EXPECT_EQ(r.checks[2].verdict, Verdict::Fail);
  EXPECT_NEAR(r.value("worst_value"), std::sqrt(2.0), 1e-9);
  EXPECT_EQ(std::string(label(r.verdict)), "VIOLATED");
}

TEST(Regula, MaxMinDualityAndScaleRobustness) {
  const auto problems = regula_suite::random_problems(20, 11);
  for (const auto& pr : problems) {
    std::vector<Point> pts = sets::sample(pr.a, 6, 3);
    for (const Point& v : pr.a.vertices()->vertices) pts.push_back(v);
    for (const Point& x : pts) {
      const Verdict vmax = check_regula(pr.f, pr.a, x, Mode::Max).verdict;
      EXPECT_EQ(check_regula(pr.f.negated(), pr.a, x, Mode::Min).verdict, vmax) << pr.name;
      const Verdict vmin = check_regula(pr.f, pr.a, x, Mode::Min).verdict;
      EXPECT_EQ(check_regula(pr.f.negated(), pr.a, x, Mode::Max).verdict, vmin) << pr.name;
      EXPECT_EQ(check_regula(pr.f.scaled(2.0), pr.a, x, Mode::Max).verdict, vmax) << pr.name;
    }
  }
}

TEST(Regula, BruteForceOptimaSatisfyTheCondition) {
  const auto problems = regula_suite::random_problems(24, 2024);
  for (const auto& pr : problems) {
    const BruteForce bf = brute_force_optimum(pr.f, pr.a, pr.mode, 60);
    const RegulaCertificate c = check_regula(pr.f, pr.a, bf.best, pr.mode);
    EXPECT_EQ(c.verdict, Verdict::Pass) << pr.name << " " << pr.f.name() << ": " << c.note;
    EXPECT_LE(c.slack, 1e-6 * (1 + c.gradient.norm()) * (1 + 1e-12));
  }
}

TEST(Regula, BruteForceFindsTheVertexOptimumOfLinearObjectives) {
  // Independent oracle: the optimum of a linear objective is the best vertex.
  const auto problems = regula_suite::random_problems(12, 5);
  for (const auto& pr : problems) {
    if (pr.f.name().find('^') != std::string::npos) continue;
    const double sign = pr.mode == Mode::Max ? 1.0 : -1.0;
    double best = -1e300;
    for (const Point& v : pr.a.vertices()->vertices) best = std::max(best, sign * pr.f(v));
    EXPECT_NEAR(sign * brute_force_optimum(pr.f, pr.a, pr.mode, 40).value, best, 1e-12) << pr.name;
  }
}

TEST(Regula, PerturbedOptimumIsViolated) {
  const auto problems = regula_suite::random_problems(12, 77);
  for (const auto& pr : problems) {
    if (pr.f.name().find('^') != std::string::npos) continue;
    const BruteForce bf = brute_force_optimum(pr.f, pr.a, pr.mode, 60);
    // One grid step toward the vertex centroid lands in the interior.
    Vector c(pr.a.dim());
    for (const Point& v : pr.a.vertices()->vertices) c += v.as_vector();
    c = c / static_cast<double>(pr.a.vertices()->vertices.size());
    const Point inner = bf.best + (Point(c.data()) - bf.best) * (1.0 / 60);
    EXPECT_EQ(check_regula(pr.f, pr.a, inner, pr.mode).verdict, Verdict::Fail) << pr.name;
  }
}

TEST(Regula, CertifyAgainstBruteForce) {
  const Report r = certify_against_bruteforce(field("x1^2+x2^2", 2), unit_square(), Mode::Min, {}, 50, 1);
  EXPECT_EQ(r.verdict, Verdict::Pass) << r.message;
  EXPECT_NEAR(r.witness_points[0][0], 0.0, 1e-12);
  EXPECT_NEAR(r.witness_points[0][1], 0.0, 1e-12);
  EXPECT_GT(r.value("refuted"), 0.0);

  const Report lin = certify_against_bruteforce(field("x1+2*x2", 2), unit_square(), Mode::Max, {}, 50, 2);
  EXPECT_EQ(lin.verdict, Verdict::Pass);
  EXPECT_NEAR(lin.value("best_value"), 3.0, 1e-12);
}

TEST(DirectionalVariation, Examples) {
  std::vector<Point> right, left, flat;
  for (int n = 1; n <= 400; ++n) {
    right.push_back(Point{1.0 / n, 0.0});
    left.push_back(Point{-1.0 / n, 1.0 / (double(n) * n)});
  }
  const Report r = directional_variation(field("x1", 2), Point{0, 0}, right);
  EXPECT_EQ(r.verdict, Verdict::Pass);
  EXPECT_NEAR(r.value("s"), 1.0, 1e-12);

  const Report l = directional_variation(field("x1", 2), Point{0, 0}, left);
  EXPECT_EQ(l.verdict, Verdict::Pass);
  EXPECT_NEAR(l.value("s"), -1.0, 1e-4);

  EXPECT_THROW(directional_variation(field("x1^2", 2), Point{0, 0}, right), std::invalid_argument);
}

TEST(DirectionalVariation, OrthogonalDirectionIsInconclusive) {
  std::vector<Point> up;
  for (int n = 1; n <= 40; ++n) up.push_back(Point{0.0, 1.0 / n});
  EXPECT_EQ(directional_variation(field("x1", 2), Point{0, 0}, up).verdict, Verdict::Inconclusive);
}

TEST(DirectionalVariation, NonCauchyDirectionsThrow) {
  std::vector<Point> spiral;
  for (int n = 1; n <= 40; ++n) spiral.push_back(Point{std::cos(n) / n, std::sin(n) / n});
  EXPECT_THROW(directional_variation(field("x1", 2), Point{0, 0}, spiral), std::invalid_argument);
}

TEST(DirectionalVariation, SignPredictionOnRandomFields) {
  std::mt19937_64 rng(123);
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  int tested = 0;
  while (tested < 100) {
    const std::string text = fmt::format("{:.6f}*sin(x1) + {:.6f}*x2^2 + {:.6f}*x1*x2 + {:.6f}*exp(x2)", g(rng), g(rng),
                                         g(rng), g(rng));
    const ScalarField f = field(text, 2);
    const Point xbar{u(rng), u(rng)};
    const Vector grad = *f.analytic_gradient(xbar);
    const Vector p = Vector{g(rng), g(rng)}.normalized();
    const Vector w{g(rng), g(rng)};
    // Skip nearly orthogonal directions: the theorem is silent there.
    if (grad.norm() < 1e-3 || std::abs(dot(grad, p)) < 0.05 * grad.norm()) continue;
    std::vector<Point> seq;
    for (int n = 1; n <= 200; ++n) seq.push_back(xbar + (1.0 / n) * (p + w * (1.0 / n)));
    const Report r = directional_variation(f, xbar, seq);
    EXPECT_EQ(r.verdict, Verdict::Pass) << text;
    EXPECT_EQ(r.value("s") > 0, dot(grad, p) > 0);
    ++tested;
  }
}
