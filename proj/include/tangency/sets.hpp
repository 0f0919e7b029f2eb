#pragma once

// Subsets of R^n behind a distance oracle.
//
// Exact oracles: empty set, point cloud, H-polyhedron, ball, and unions of
// these. Parametric patches and sublevel sets are approximate and report an
// accuracy bound with every distance.

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "tangency/expr.hpp"
#include "tangency/field.hpp"
#include "tangency/geometry.hpp"

namespace tangency::sets {

class SamplingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnboundedSet : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// p -> center + lambda (p - center).
struct Homothety {
  Point center;
  double lambda = 1.0;
};

struct Box {
  Point lo;
  Point hi;
};

struct EmptySet {};

struct PointCloud {
  std::vector<Point> points;
};

/// {z : <normals[i], z> <= offsets[i]}.
struct HPolyhedron {
  std::vector<Vector> normals;
  std::vector<double> offsets;
};

struct Ball {
  Point center;
  double radius = 0.0;
  bool closed = true;
};

/// Image of a box in R^k under a vector of expressions in x1..xk.
struct ParamPatch {
  std::vector<exprs::Expr> map;
  std::vector<std::pair<double, double>> domain;
  int grid = 201;
};

struct Sublevel {
  ScalarField field;
  double level = 0.0;
  std::optional<Box> box;
};

class SetRep;

struct Union {
  std::vector<SetRep> members;
};

struct Distance {
  double value = 0.0;
  double bound = 0.0;  // absolute accuracy bound on value
};

class SetRep {
 public:
  using Variant = std::variant<EmptySet, PointCloud, HPolyhedron, Ball, ParamPatch, Sublevel, Union>;

  static SetRep empty(std::size_t dim);
  static SetRep point_cloud(std::vector<Point> points);
  static SetRep polyhedron(std::vector<Vector> normals, std::vector<double> offsets);
  static SetRep box(const Point& lo, const Point& hi);
  static SetRep ball(Point center, double radius, bool closed = true);
  static SetRep patch(std::vector<exprs::Expr> map, std::vector<std::pair<double, double>> domain, int grid = 201);
  static SetRep sublevel(ScalarField field, double level, std::optional<Box> box = std::nullopt);
  static SetRep union_of(std::vector<SetRep> members);

  std::size_t dim() const;
  const Variant& variant() const;
  /// Homotheties applied, in order, on top of the base patch or sublevel set.
  const std::vector<Homothety>& transforms() const;
  std::string kind() const;

  bool is_empty() const;
  /// True when every distance is exact up to rounding.
  bool is_exact() const;
  bool bounded() const;
  /// Vertex cache for polyhedra in dim <= 3; null otherwise.
  const VertexList* vertices() const;

  struct Data;
  const Data& data() const { return *d_; }

 private:
  explicit SetRep(std::shared_ptr<const Data> d) : d_(std::move(d)) {}
  std::shared_ptr<const Data> d_;

  friend SetRep homothety(const SetRep& a, const Point& x, double lambda);
};

Distance distance_to_set(const Point& y, const SetRep& a);
inline double distance(const Point& y, const SetRep& a) { return distance_to_set(y, a).value; }

/// Deterministic samples of A; same seed, same output.
std::vector<Point> sample(const SetRep& a, std::size_t count, std::uint64_t seed);

/// x + lambda (A - x), transformed natively where the variant allows it.
SetRep homothety(const SetRep& a, const Point& x, double lambda);

/// Point of the base patch at domain parameter t, with transforms applied.
Point patch_point(const SetRep& a, std::span<const double> t);

/// Domain parameter of the patch point nearest to y, with that distance.
struct ParamNearest {
  std::vector<double> t;
  double distance = 0.0;
};
ParamNearest nearest_parameter(const SetRep& patch, const Point& y);

/// d(y, A) <= tol + reported bound.
bool in_closure(const Point& y, const SetRep& a, double tol);

}  // namespace tangency::sets
