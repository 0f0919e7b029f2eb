#pragma once

// Fixed cone instances shared by the cone tests and the acceptance run:
// twelve hand-built sets and seeded random polytopes in dim 2 and 3.

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "tangency/sets.hpp"

namespace suite {

using tangency::Point;
using tangency::Vector;
using tangency::sets::SetRep;

struct Instance {
  std::string name;
  SetRep a;
  Point x;
  std::optional<SetRep> b;
};

inline SetRep geometric_sequence() {
  std::vector<Point> pts{Point{0.0}};
  for (int n = 0; n <= 60; ++n) pts.push_back(Point{std::ldexp(1.0, -n)});
  return SetRep::point_cloud(pts);
}

inline SetRep cusp() {
  return SetRep::patch({tangency::exprs::parse("x1", 1), tangency::exprs::parse("abs(x1)", 1)}, {{-1.0, 1.0}}, 201);
}

inline SetRep circle() {
  return SetRep::patch({tangency::exprs::parse("cos(x1)", 1), tangency::exprs::parse("sin(x1)", 1)},
                       {{-std::numbers::pi, std::numbers::pi}}, 401);
}

inline std::vector<Instance> hand_built() {
  const SetRep square = SetRep::box(Point{0, 0}, Point{1, 1});
  const SetRep cube = SetRep::box(Point{0, 0, 0}, Point{1, 1, 1});
  return {
      {"square-vertex", square, Point{0, 0}, std::nullopt},
      {"square-edge", square, Point{0.5, 0}, std::nullopt},
      {"square-interior", square, Point{0.5, 0.5}, std::nullopt},
      {"ball-boundary", SetRep::ball(Point{0, 0}, 1.0), Point{1, 0}, std::nullopt},
      {"cusp", cusp(), Point{0, 0}, std::nullopt},
      {"isolated-point", SetRep::point_cloud({Point{0, 0}}), Point{0, 0}, std::nullopt},
      {"squares-sharing-vertex", square, Point{0, 0}, SetRep::box(Point{-1, -1}, Point{0, 0})},
      {"cube-vertex", cube, Point{0, 0, 0}, std::nullopt},
      {"cube-edge", cube, Point{0.5, 0, 0}, std::nullopt},
      {"circle", circle(), Point{1, 0}, std::nullopt},
      {"geometric-sequence", geometric_sequence(), Point{0.0}, std::nullopt},
      {"half-plane", SetRep::polyhedron({Vector{0, 1}}, {0.0}), Point{0, 0}, std::nullopt},
  };
}

inline std::vector<Vector> active_rows(const tangency::sets::HPolyhedron& h, const Point& x) {
  std::vector<Vector> out;
  for (std::size_t i = 0; i < h.normals.size(); ++i)
    if (std::abs(tangency::dot(h.normals[i], x.as_vector()) - h.offsets[i]) <= 1e-9 * (1 + std::abs(h.offsets[i])))
      out.push_back(h.normals[i]);
  return out;
}

inline long rank_of(const std::vector<Vector>& rows, std::size_t dim) {
  if (rows.empty()) return 0;
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(dim));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < dim; ++j) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
  lu.setThreshold(1e-9);
  return lu.rank();
}

/// Box [-1,1]^d cut by 2..4 random half-spaces keeping the origin inside;
/// x cycles through vertex, edge point and interior point.
inline std::vector<Instance> random_polytopes(int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> off(0.3, 0.9);
  std::vector<Instance> out;
  for (int k = 0; out.size() < static_cast<std::size_t>(count); ++k) {
    const std::size_t d = k % 2 == 0 ? 2 : 3;
    std::vector<Vector> normals;
    std::vector<double> offsets;
    for (std::size_t i = 0; i < d; ++i) {
      normals.push_back(Vector::basis(d, i));
      normals.push_back(-Vector::basis(d, i));
      offsets.push_back(1.0);
      offsets.push_back(1.0);
    }
    const int cuts = 2 + static_cast<int>(rng() % 3);
    for (int c = 0; c < cuts; ++c) {
      Vector a(d);
      for (std::size_t i = 0; i < d; ++i) a[i] = gauss(rng);
      normals.push_back(a.normalized());
      offsets.push_back(off(rng));
    }
    const SetRep p = SetRep::polyhedron(normals, offsets);
    const auto& h = std::get<tangency::sets::HPolyhedron>(p.variant());
    const auto& verts = p.vertices()->vertices;
    std::optional<Point> x;
    std::string kind;
    switch (k % 3) {
      case 0:
        x = verts[rng() % verts.size()];
        kind = "vertex";
        break;
      case 1: {
        const std::size_t start = rng() % verts.size();
        for (std::size_t s = 0; s < verts.size() * verts.size() && !x; ++s) {
          const std::size_t i = (start + s / verts.size()) % verts.size(), j = s % verts.size();
          if (i == j) continue;
          const Point m((0.5 * (verts[i].as_vector() + verts[j].as_vector())).data());
          if (rank_of(active_rows(h, m), d) == static_cast<long>(d) - 1) x = m;
        }
        kind = "edge";
        break;
      }
      default: {
        Vector sum(d);
        for (const auto& v : verts) sum += v.as_vector();
        x = Point((sum / static_cast<double>(verts.size())).data());
        kind = "interior";
      }
    }
    if (!x) continue;
    out.push_back({"random-" + std::to_string(d) + "d-" + kind + "-" + std::to_string(k), p, *x, std::nullopt});
  }
  return out;
}

}  // namespace suite
