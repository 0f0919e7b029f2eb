#pragma once

// First-order necessary conditions for constrained extrema: at a maximizer x
// of f on A, <Df(x), v> <= 0 for every v in Tang(A,x) - x (>= 0 at a
// minimizer). SATISFIED never claims optimality.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "tangency/cones.hpp"
#include "tangency/field.hpp"
#include "tangency/report.hpp"
#include "tangency/sets.hpp"

namespace tangency::regula {

enum class Mode { Max, Min };
const char* to_string(Mode m);
/// "max" / "min"; throws std::invalid_argument otherwise.
Mode parse_mode(const std::string& s);

/// SATISFIED / VIOLATED / INCONCLUSIVE.
const char* label(Verdict v);

class FarFromSet : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct RegulaCertificate {
  Mode mode = Mode::Max;
  Point point;
  Vector gradient;
  bool analytic_gradient = false;
  cones::Cone cone;
  /// Unit cone direction maximizing <Df, v> (max mode; minimizing in min
  /// mode); zero vector when the cone is the apex alone.
  Vector worst_direction;
  /// sup of <Df, v> over {v in cone, |v| <= 1} (inf in min mode); v = 0 is
  /// included, so the value is >= 0 for max and <= 0 for min.
  double worst_value = 0.0;
  Verdict verdict = Verdict::Inconclusive;
  double slack = 0.0;
  Verdict frechet = Verdict::Pass;  // differentiability check at x
  std::string frechet_message;
  std::string note;

  Report to_report() const;
};

/// tol defaults to 1e-6 (1 + |Df(x)|).
RegulaCertificate check_regula(const ScalarField& f, const sets::SetRep& a, const Point& x, Mode mode,
                               const cones::BlowUpParams& p = {}, std::optional<double> tol = std::nullopt);

/// Sign of f(x_n) - f(xbar) on the last quarter of seq against <Df(xbar), p>,
/// p the limiting direction of (x_n - xbar) / |x_n - xbar|.
Report directional_variation(const ScalarField& f, const Point& xbar, const std::vector<Point>& seq,
                             double tol = 1e-6, double direction_tol = 1e-2);

struct BruteForce {
  Point best;
  double value = 0.0;
  std::size_t evaluated = 0;
};

/// Direct search over vertices, edges (grid points), 2-faces (grid x grid) and
/// the interior of a bounded polyhedron in dim 2 or 3.
BruteForce brute_force_optimum(const ScalarField& f, const sets::SetRep& polytope, Mode mode, int grid = 200);

/// check_regula at the brute-force optimum (must be SATISFIED) and at random
/// non-optimal sample points (refuted vs. satisfied non-optima counted).
Report certify_against_bruteforce(const ScalarField& f, const sets::SetRep& a, Mode mode = Mode::Max,
                                  const cones::BlowUpParams& p = {}, int grid = 200, std::uint64_t seed = 1);

}  // namespace tangency::regula
