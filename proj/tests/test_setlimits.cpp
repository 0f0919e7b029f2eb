#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "tangency/setlimits.hpp"

using namespace tangency;
using namespace tangency::sets;
using namespace tangency::setlimits;

namespace {

SetFamily reciprocal_family() {
  return SetFamily([](double lam, std::size_t) { return SetRep::point_cloud({Point{1.0 / lam}}); },
                   Schedule::standard());
}

SetFamily alternating_family() {
  return SetFamily(
      [](double, std::size_t j) { return SetRep::point_cloud({Point{j % 2 == 0 ? 0.0 : 1.0}}); },
      Schedule::standard());
}

SetFamily sin_inverse_family() {
  return SetFamily(
      [](double lam, std::size_t) {
        return SetRep::patch({exprs::parse("sin(1/x1)", 1)}, {{1.0 / (lam + 20 * std::numbers::pi), 1.0 / lam}}, 4001);
      },
      Schedule::standard());
}

SetFamily shrinking_balls() {
  return SetFamily([](double lam, std::size_t) { return SetRep::ball(Point{0, 0}, 1.0 + 1.0 / lam); },
                   Schedule::standard());
}

// Brute-force tail statistics straight from the definition.
double tail_extreme(const SetFamily& f, const Point& y, bool take_max) {
  const std::size_t t0 = f.size() - f.size() / 4;
  double v = take_max ? 0.0 : INFINITY;
  for (std::size_t j = t0; j < f.size(); ++j) {
    const double d = distance(y, f.at(j));
    v = take_max ? std::max(v, d) : std::min(v, d);
  }
  return v;
}

}  // namespace

TEST(Schedule, StandardIsPowersOfTwoFrom8) {
  const Schedule s = Schedule::standard();
  ASSERT_EQ(s.size(), 18u);
  EXPECT_EQ(s.lambdas.front(), 8.0);
  EXPECT_EQ(s.lambdas.back(), std::pow(2.0, 20));
  EXPECT_EQ(s.tail_begin(), 14u);
  Schedule bad{{1, 2, 2, 3, 4, 5, 6, 7}};
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  const Schedule short_one{{1, 2, 3}};
  EXPECT_THROW(short_one.validate(), std::invalid_argument);
}

TEST(LowerLimit, ReciprocalSingletons) {
  const SetFamily f = reciprocal_family();
  const auto v0 = lower_limit_member(Point{0.0}, f, 1e-4);
  EXPECT_TRUE(v0.member);
  EXPECT_EQ(v0.trace.size(), 18u);
  EXPECT_EQ(v0.rule, LimitRule::Lim);
  EXPECT_FALSE(lower_limit_member(Point{1.0}, f, 1e-4).member);
}

TEST(LowerLimit, AlternatingFamilyFailsAtZero) {
  const auto v = lower_limit_member(Point{0.0}, alternating_family(), 1e-6);
  EXPECT_FALSE(v.member);
  EXPECT_EQ(v.tail_value, 1.0);
  EXPECT_EQ(v.tail_value, tail_extreme(alternating_family(), Point{0.0}, true));
}

TEST(UpperLimit, AlternatingFamilyContainsZero) {
  const auto v = upper_limit_member(Point{0.0}, alternating_family(), 1e-6);
  EXPECT_TRUE(v.member);
  EXPECT_EQ(v.rule, LimitRule::LimInf);
  EXPECT_EQ(v.tail_value, 0.0);
}

TEST(UpperLimit, SinInverseAdherence) {
  const SetFamily f = sin_inverse_family();
  EXPECT_TRUE(upper_limit_member(Point{0.37}, f, 1e-6).member);
  EXPECT_TRUE(upper_limit_member(Point{-1.0}, f, 1e-6).member);
  EXPECT_FALSE(upper_limit_member(Point{1.2}, f, 1e-6).member);
}

TEST(Limits, LowerImpliesUpperOnRandomProbes) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  const std::vector<SetFamily> families{reciprocal_family(), alternating_family(), sin_inverse_family()};
  for (const auto& f : families)
    for (int i = 0; i < 50; ++i) {
      const Point y{u(rng)};
      if (lower_limit_member(y, f, 1e-3).member) EXPECT_TRUE(upper_limit_member(y, f, 1e-3).member);
    }
}

TEST(Limits, MonotoneFamilyPointsAreLowerLimitMembers) {
  // A_lambda = [0, 1 - 1/lambda] increases with lambda.
  const SetFamily f([](double lam, std::size_t) { return SetRep::box(Point{0.0}, Point{1.0 - 1.0 / lam}); },
                    Schedule::standard());
  // Members entering inside the tail window have not yet been followed for a
  // full tail, so the finite surrogate only speaks for earlier members.
  for (std::size_t j = 0; j < f.schedule().tail_begin(); ++j)
    for (const auto& p : sample(f.at(j), 10, j)) EXPECT_TRUE(lower_limit_member(p, f, 1e-12).member);
}

TEST(Limits, InconclusiveWhenOracleBoundExceedsTolerance) {
  const auto v = upper_limit_member(Point{0.37}, sin_inverse_family(), 1e-300);
  EXPECT_EQ(v.verdict, Verdict::Inconclusive);
}

TEST(LsCountable, ConstantSequenceGivesTheSet) {
  const SetRep a = SetRep::point_cloud({Point{0, 0}, Point{1, 1}});
  const std::vector<SetRep> seq(12, a);
  const SetRep ls = ls_countable(seq, 1e-9);
  EXPECT_EQ(hausdorff_distance(ls, a, 100), 0.0);
}

TEST(LsCountable, AlternatingSignsGiveBothPoints) {
  std::vector<SetRep> seq;
  for (int n = 1; n <= 16; ++n) seq.push_back(SetRep::point_cloud({Point{n % 2 ? -1.0 : 1.0}}));
  const SetRep ls = ls_countable(seq, 1e-9);
  EXPECT_EQ(hausdorff_distance(ls, SetRep::point_cloud({Point{-1.0}, Point{1.0}}), 100), 0.0);
}

TEST(LsCountable, ReciprocalsShrinkToZero) {
  std::vector<SetRep> seq;
  const int n = 400;
  for (int k = 1; k <= n; ++k) seq.push_back(SetRep::point_cloud({Point{1.0 / k}}));
  const SetRep ls = ls_countable(seq, 1e-9);
  // The surrogate keeps only tail points, all within 4/(3N) of zero.
  EXPECT_LE(hausdorff_distance(ls, SetRep::point_cloud({Point{0.0}}), 100), 4.0 / (3.0 * n));
}

TEST(Hausdorff, Examples) {
  const SetRep zero = SetRep::point_cloud({Point{0.0}});
  const SetRep one = SetRep::point_cloud({Point{1.0}});
  EXPECT_EQ(hausdorff_distance(zero, one, 100), 1.0);
  EXPECT_EQ(hausdorff_distance(zero, zero, 100), 0.0);
  const double h = hausdorff_distance(SetRep::ball(Point{0, 0}, 1.0), SetRep::ball(Point{0, 0}, 1.25), 400);
  EXPECT_NEAR(h, 0.25, 0.01);
  EXPECT_THROW(hausdorff_distance(SetRep::polyhedron({Vector{1.0}}, {0.0}), zero, 100), UnboundedSet);
}

TEST(Hausdorff, SymmetricWithTriangleInequality) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(-1, 1);
  auto cloud = [&]() {
    std::vector<Point> pts;
    for (int i = 0; i < 20; ++i) pts.push_back(Point{u(rng), u(rng)});
    return SetRep::point_cloud(pts);
  };
  for (int i = 0; i < 50; ++i) {
    const SetRep a = cloud(), b = cloud(), c = cloud();
    const double ab = hausdorff_distance(a, b, 100), ba = hausdorff_distance(b, a, 100);
    EXPECT_EQ(ab, ba);
    EXPECT_LE(ab, hausdorff_distance(a, c, 100) + hausdorff_distance(c, b, 100) + 1e-12);
  }
}

TEST(Convergence, ShrinkingBallsPass) {
  const Report r = convergence_check(shrinking_balls(), SetRep::ball(Point{0, 0}, 1.0), 1e-3, 200);
  EXPECT_EQ(r.verdict, Verdict::Pass) << r.message;
}

TEST(Convergence, AlternatingFamilyFailsWithWitnessOne) {
  const Report r = convergence_check(alternating_family(), SetRep::point_cloud({Point{0.0}}), 1e-6, 100);
  EXPECT_EQ(r.verdict, Verdict::Fail);
  ASSERT_FALSE(r.witness_points.empty());
  EXPECT_EQ(r.witness_points.front(), Point{1.0});
  EXPECT_EQ(r.checks.front().verdict, Verdict::Fail);
}

TEST(Convergence, ConstantFamiliesPassForExactVariants) {
  const std::vector<SetRep> zoo{SetRep::point_cloud({Point{0, 0}, Point{2, 1}}), SetRep::box(Point{0, 0}, Point{1, 1}),
                                SetRep::ball(Point{1, 1}, 0.5),
                                SetRep::union_of({SetRep::box(Point{0, 0}, Point{1, 1}), SetRep::ball(Point{3, 0}, 1)})};
  for (const auto& a : zoo) {
    const Report r = convergence_check(SetFamily::constant(a, Schedule::standard()), a, 1e-9, 100);
    EXPECT_EQ(r.verdict, Verdict::Pass) << a.kind();
  }
}
