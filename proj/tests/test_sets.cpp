#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "tangency/sets.hpp"

using namespace tangency;
using namespace tangency::sets;

namespace {

SetRep unit_square() { return SetRep::box(Point{0, 0}, Point{1, 1}); }

SetRep circle_patch() {
  return SetRep::patch({exprs::parse("cos(x1)", 1), exprs::parse("sin(x1)", 1)}, {{0.0, 2 * std::numbers::pi}}, 401);
}

std::vector<SetRep> exact_zoo() {
  return {
      SetRep::point_cloud({Point{0, 0}, Point{1, 2}, Point{-1, 0.5}}),
      unit_square(),
      SetRep::ball(Point{0.5, -0.5}, 1.5),
      SetRep::polyhedron({Vector{1, 1}, Vector{-1, 0}, Vector{0, -1}}, {1, 0, 0}),
      SetRep::union_of({unit_square(), SetRep::ball(Point{3, 0}, 0.5)}),
  };
}

Point random_point(std::mt19937_64& rng, std::size_t dim, double r) {
  std::uniform_real_distribution<double> u(-r, r);
  Point p(dim);
  for (std::size_t i = 0; i < dim; ++i) p[i] = u(rng);
  return p;
}

// Dense parametrization of the unit circle, independent of the ball oracle.
double dense_circle_distance(const Point& y) {
  double best = INFINITY;
  for (int k = 0; k < 200000; ++k) {
    const double th = 2 * std::numbers::pi * k / 200000.0;
    best = std::min(best, std::hypot(y[0] - std::cos(th), y[1] - std::sin(th)));
  }
  return best;
}

}  // namespace

TEST(Distance, PointOutsideUnitBall) {
  const SetRep ball = SetRep::ball(Point{0, 0}, 1.0);
  EXPECT_DOUBLE_EQ(distance(Point{2, 0}, ball), 1.0);
  EXPECT_NEAR(dense_circle_distance(Point{2, 0}), 1.0, 1e-9);
}

TEST(Distance, PointInCloudIsZero) {
  const SetRep cloud = SetRep::point_cloud({Point{1, 2}, Point{3, 4}});
  EXPECT_EQ(distance(Point{3, 4}, cloud), 0.0);
}

TEST(Distance, HalfPlane) {
  const SetRep half = SetRep::polyhedron({Vector{0, 1}}, {0.0});
  EXPECT_NEAR(distance(Point{0, 2}, half), 2.0, 1e-14);
  double dense = INFINITY;
  for (int k = -5000; k <= 5000; ++k) dense = std::min(dense, std::hypot(k * 1e-3, 2.0));
  EXPECT_NEAR(dense, 2.0, 1e-12);
}

TEST(Distance, EmptySetIsInfinite) {
  EXPECT_TRUE(std::isinf(distance(Point{0, 0}, SetRep::empty(2))));
  EXPECT_THROW(sample(SetRep::empty(2), 3, 1), SamplingError);
}

TEST(Distance, DimensionMismatchThrows) {
  EXPECT_THROW(distance(Point{0, 0, 0}, unit_square()), DimensionMismatch);
}

TEST(Construction, RejectsDegenerateInput) {
  EXPECT_THROW(SetRep::polyhedron({Vector{0, 0}}, {1.0}), std::invalid_argument);
  EXPECT_THROW(SetRep::patch({exprs::parse("x1", 1)}, {{1.0, 1.0}}), std::invalid_argument);
  EXPECT_THROW(SetRep::point_cloud({}), std::invalid_argument);
  EXPECT_THROW(SetRep::ball(Point{0}, -1.0), std::invalid_argument);
}

TEST(Sample, CloudReturnsItsPoints) {
  const std::vector<Point> pts{Point{0, 0}, Point{1, 0}, Point{0, 1}};
  EXPECT_EQ(sample(SetRep::point_cloud(pts), 3, 5), pts);
}

TEST(Sample, BallPointsLieInTheBall) {
  const auto pts = sample(SetRep::ball(Point{0, 0}, 1.0), 100, 7);
  ASSERT_EQ(pts.size(), 100u);
  for (const auto& p : pts) EXPECT_LE(p.as_vector().norm(), 1.0 + 1e-15);
}

TEST(Sample, SquarePointsSatisfyAllRows) {
  const auto pts = sample(unit_square(), 50, 3);
  ASSERT_EQ(pts.size(), 50u);
  for (const auto& p : pts) {
    EXPECT_GE(p[0], -1e-15);
    EXPECT_LE(p[0], 1 + 1e-15);
    EXPECT_GE(p[1], -1e-15);
    EXPECT_LE(p[1], 1 + 1e-15);
  }
}

TEST(Sample, DeterministicForASeed) {
  for (const auto& a : exact_zoo()) {
    EXPECT_EQ(sample(a, 40, 11), sample(a, 40, 11)) << a.kind();
  }
}

TEST(Sample, SublevelNeedsABox) {
  const auto disk = SetRep::sublevel(ScalarField::from_expression("x1^2+x2^2", 2), 1.0);
  EXPECT_THROW(sample(disk, 10, 1), SamplingError);
  EXPECT_THROW(sample(SetRep::polyhedron({Vector{0, 1}}, {0.0}), 10, 1), UnboundedSet);
}

TEST(Homothety, IdentityAndPointImage) {
  const SetRep sq = unit_square();
  const SetRep same = homothety(sq, Point{0.3, 0.3}, 1.0);
  EXPECT_EQ(sample(same, 20, 1), sample(sq, 20, 1));
  const SetRep img = homothety(SetRep::point_cloud({Point{1, 0}}), Point{0, 0}, 3.0);
  EXPECT_EQ(std::get<PointCloud>(img.variant()).points, (std::vector<Point>{Point{3, 0}}));
}

TEST(Homothety, BallAboutBoundaryPoint) {
  const SetRep img = homothety(SetRep::ball(Point{0, 0}, 1.0), Point{1, 0}, 2.0);
  const auto& b = std::get<Ball>(img.variant());
  EXPECT_EQ(b.center, (Point{-1, 0}));
  EXPECT_EQ(b.radius, 2.0);
  // Pointwise image of the sampled boundary must lie on the new boundary.
  for (int k = 0; k < 360; ++k) {
    const double th = 2 * std::numbers::pi * k / 360.0;
    const Point q = homothetic_image(Point{std::cos(th), std::sin(th)}, Point{1, 0}, 2.0);
    EXPECT_NEAR((q - b.center).norm(), b.radius, 1e-12);
  }
}

TEST(Homothety, RoundTripReproducesExactVariants) {
  const Point x{0.25, 0.75};
  for (const auto& a : exact_zoo()) {
    for (double lam : {0.5, 3.0, 1024.0}) {
      const SetRep back = homothety(homothety(a, x, lam), x, 1.0 / lam);
      for (const auto& p : sample(a, 60, 2)) ASSERT_LE(distance(p, back), 1e-9) << a.kind();
      for (const auto& p : sample(back, 60, 2)) ASSERT_LE(distance(p, a), 1e-9) << a.kind();
    }
  }
}

TEST(Homothety, PatchBlowUpMatchesRescaledDistance) {
  const SetRep c = circle_patch();
  const Point x{1, 0};
  for (double lam : {2.0, 1024.0, 1048576.0}) {
    const SetRep blown = homothety(c, x, lam);
    const SetRep ball_blown = homothety(SetRep::ball(Point{0, 0}, 1.0), x, lam);
    for (const Point& y : {Point{1, 1}, Point{0, 0.5}, Point{1.5, -0.3}}) {
      const auto& b = std::get<Ball>(ball_blown.variant());
      const double exact = std::abs((y - b.center).norm() - b.radius);
      const Distance d = distance_to_set(y, blown);
      EXPECT_NEAR(d.value, exact, 1e-6 + d.bound) << lam;
    }
  }
}

TEST(Closure, SamplesAreInTheClosure) {
  for (const auto& a : exact_zoo())
    for (const auto& p : sample(a, 100, 4)) ASSERT_TRUE(in_closure(p, a, 1e-9)) << a.kind();
}

TEST(Closure, OpenBallHasClosedClosure) {
  const SetRep open = SetRep::ball(Point{0, 0}, 1.0, false);
  EXPECT_EQ(distance(Point{1, 0}, open), 0.0);
}

TEST(Distance, OneLipschitzOnRandomPairs) {
  std::mt19937_64 rng(8);
  std::vector<SetRep> zoo = exact_zoo();
  zoo.push_back(circle_patch());
  zoo.push_back(SetRep::sublevel(ScalarField::from_expression("x1^2+x2^2", 2), 1.0, Box{Point{-1, -1}, Point{1, 1}}));
  for (const auto& a : zoo) {
    for (int i = 0; i < 200; ++i) {
      const Point y = random_point(rng, 2, 3), z = random_point(rng, 2, 3);
      const Distance dy = distance_to_set(y, a), dz = distance_to_set(z, a);
      ASSERT_LE(std::abs(dy.value - dz.value), (y - z).norm() + dy.bound + dz.bound + 1e-12) << a.kind();
    }
  }
}

TEST(Distance, ApproximateOraclesMatchExactBall) {
  std::mt19937_64 rng(9);
  const SetRep ball = SetRep::ball(Point{0, 0}, 1.0);
  const SetRep disk =
      SetRep::sublevel(ScalarField::from_expression("x1^2+x2^2", 2), 1.0, Box{Point{-1, -1}, Point{1, 1}});
  const SetRep circle = circle_patch();
  for (int i = 0; i < 200; ++i) {
    const Point y = random_point(rng, 2, 3);
    const double exact = distance(y, ball);
    const Distance ds = distance_to_set(y, disk);
    EXPECT_NEAR(ds.value, exact, 1e-9 + ds.bound);
    const Distance dc = distance_to_set(y, circle);
    EXPECT_NEAR(dc.value, std::abs(y.as_vector().norm() - 1.0), 1e-9 + dc.bound);
  }
}

TEST(Distance, CuspPatchAgainstClosedForm) {
  // Graph of |t| on [-1,1]: distance from (a, b) with b > |a| is |b - |a|| / sqrt 2 near the vertex.
  const SetRep cusp = SetRep::patch({exprs::parse("x1", 1), exprs::parse("abs(x1)", 1)}, {{-1.0, 1.0}}, 201);
  const Point y{0.1, 0.3};
  EXPECT_NEAR(distance(y, cusp), (0.3 - 0.1) / std::sqrt(2.0), 1e-12);
  const SetRep blown = homothety(cusp, Point{0, 0}, std::pow(2.0, 20));
  EXPECT_NEAR(distance(Point{1 / std::sqrt(2.0), 1 / std::sqrt(2.0)}, blown), 0.0, 1e-7);
}

TEST(Union, DistanceIsMinimumOverMembers) {
  const SetRep u = SetRep::union_of({SetRep::point_cloud({Point{0, 0}}), SetRep::point_cloud({Point{5, 0}})});
  EXPECT_DOUBLE_EQ(distance(Point{4, 0}, u), 1.0);
  EXPECT_TRUE(u.is_exact());
  EXPECT_FALSE(SetRep::union_of({u, circle_patch()}).is_exact());
}
