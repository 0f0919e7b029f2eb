#pragma once

// Seeded optimization instances: linear or convex-quadratic objectives over
// random bounded polytopes in dim 2 and 3. Every optimum sits at a vertex
// (linear objectives, or maximized convex quadratics).

#include <fmt/format.h>

#include <random>
#include <string>
#include <vector>

#include "tangency/field.hpp"
#include "tangency/regula.hpp"
#include "tangency/sets.hpp"

namespace regula_suite {

using tangency::Point;
using tangency::ScalarField;
using tangency::Vector;
using tangency::sets::SetRep;

struct Problem {
  std::string name;
  ScalarField f;
  SetRep a;
  tangency::regula::Mode mode;
};

inline SetRep random_polytope(std::mt19937_64& rng, std::size_t d) {
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> off(0.3, 0.9);
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
  return SetRep::polyhedron(normals, offsets);
}

inline std::vector<Problem> random_problems(int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  std::vector<Problem> out;
  for (int k = 0; k < count; ++k) {
    const std::size_t d = k % 2 == 0 ? 2 : 3;
    const SetRep a = random_polytope(rng, d);
    std::string text;
    tangency::regula::Mode mode = tangency::regula::Mode::Max;
    if (k % 3 != 2) {
      for (std::size_t i = 0; i < d; ++i) text += fmt::format("{}{:.17g}*x{}", i ? " + " : "", gauss(rng), i + 1);
      if (k % 4 == 1) mode = tangency::regula::Mode::Min;
    } else {
      // (x - b)^T L L^T (x - b), written through the components of L^T (x - b).
      for (std::size_t r = 0; r < d; ++r) {
        std::string row;
        for (std::size_t i = r; i < d; ++i)
          row += fmt::format("{}{:.17g}*(x{} - {:.17g})", i > r ? " + " : "", gauss(rng), i + 1, 0.5 * gauss(rng));
        text += fmt::format("{}({})^2", r ? " + " : "", row);
      }
    }
    out.push_back({fmt::format("problem-{}d-{}", d, k), ScalarField::from_expression(text, static_cast<int>(d)), a,
                   mode});
  }
  return out;
}

}  // namespace regula_suite
