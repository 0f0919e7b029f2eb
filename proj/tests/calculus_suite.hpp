#pragma once

// Seeded smooth fields shared by the calculus tests and the acceptance run.

#include <fmt/format.h>

#include <random>
#include <string>

#include "tangency/field.hpp"

namespace calculus_suite {

using tangency::Point;
using tangency::ScalarField;

// Random smooth field: a few polynomial and trig terms with moderate coefficients.
inline ScalarField random_smooth_field(std::mt19937_64& rng, int dim) {
  std::uniform_real_distribution<double> coef(-2.0, 2.0);
  std::uniform_int_distribution<int> power(0, 3), var(1, dim), kind(0, 2);
  std::string text;
  for (int term = 0; term < 4; ++term) {
    const double c = coef(rng);
    std::string t;
    switch (kind(rng)) {
      case 0:
        t = fmt::format("{:.6f}*x{}^{}*x{}^{}", c, var(rng), power(rng), var(rng), power(rng));
        break;
      case 1:
        t = fmt::format("{:.6f}*sin({:.6f}*x{} + {:.6f}*x{})", c, coef(rng), var(rng), coef(rng), var(rng));
        break;
      default:
        t = fmt::format("{:.6f}*exp({:.6f}*x{})*cos(x{})", c, 0.5 * coef(rng), var(rng), var(rng));
    }
    text += (term ? " + " : "") + t;
  }
  return ScalarField::from_expression(text, dim);
}

inline Point random_point(std::mt19937_64& rng, int dim) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Point p(static_cast<std::size_t>(dim));
  for (int i = 0; i < dim; ++i) p[static_cast<std::size_t>(i)] = u(rng);
  return p;
}

}  // namespace calculus_suite
