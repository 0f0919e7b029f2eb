#pragma once

// Euclidean primitives. Points live in the affine space, Vectors in the
// attached vector space; the only mixed operations are
//   Point - Point -> Vector,  Point + Vector -> Point,  Point - Vector -> Point.

#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace tangency {

class DimensionMismatch : public std::invalid_argument {
 public:
  DimensionMismatch(std::size_t a, std::size_t b)
      : std::invalid_argument("dimension mismatch: " + std::to_string(a) + " vs " + std::to_string(b)) {}
};

namespace detail {
inline void require_same(std::size_t a, std::size_t b) {
  if (a != b) throw DimensionMismatch(a, b);
}
}  // namespace detail

class Vector {
 public:
  Vector() = default;
  explicit Vector(std::size_t dim) : c_(dim, 0.0) {}
  explicit Vector(std::vector<double> comps) : c_(std::move(comps)) {}
  Vector(std::initializer_list<double> comps) : c_(comps) {}

  static Vector basis(std::size_t dim, std::size_t i) {
    Vector v(dim);
    v.c_.at(i) = 1.0;
    return v;
  }

  std::size_t dim() const { return c_.size(); }
  double operator[](std::size_t i) const { return c_[i]; }
  double& operator[](std::size_t i) { return c_[i]; }
  std::span<const double> comps() const { return c_; }
  const std::vector<double>& data() const { return c_; }

  double norm() const;
  double norm_squared() const;
  /// Unit vector in the same direction; throws on the zero vector.
  Vector normalized() const;
  bool finite() const;

  Vector& operator+=(const Vector& o);
  Vector& operator-=(const Vector& o);
  Vector& operator*=(double s);

  friend Vector operator+(Vector a, const Vector& b) { return a += b; }
  friend Vector operator-(Vector a, const Vector& b) { return a -= b; }
  friend Vector operator*(Vector a, double s) { return a *= s; }
  friend Vector operator*(double s, Vector a) { return a *= s; }
  friend Vector operator/(Vector a, double s) { return a *= 1.0 / s; }
  friend Vector operator-(Vector a) { return a *= -1.0; }
  friend bool operator==(const Vector& a, const Vector& b) = default;

 private:
  std::vector<double> c_;
};

class Point {
 public:
  Point() = default;
  explicit Point(std::size_t dim) : c_(dim, 0.0) {}
  explicit Point(std::vector<double> coords) : c_(std::move(coords)) {}
  Point(std::initializer_list<double> coords) : c_(coords) {}

  std::size_t dim() const { return c_.size(); }
  double operator[](std::size_t i) const { return c_[i]; }
  double& operator[](std::size_t i) { return c_[i]; }
  std::span<const double> coords() const { return c_; }
  const std::vector<double>& data() const { return c_; }
  bool finite() const;

  /// Position vector relative to the origin of coordinates.
  Vector as_vector() const { return Vector(c_); }

  friend Vector operator-(const Point& a, const Point& b);
  friend Point operator+(const Point& p, const Vector& v);
  friend Point operator-(const Point& p, const Vector& v);
  friend bool operator==(const Point& a, const Point& b) = default;

 private:
  std::vector<double> c_;
};

double dot(const Vector& u, const Vector& v);
double distance(const Point& a, const Point& b);
/// Angle in [0, pi] between two nonzero vectors.
double angle_between(const Vector& u, const Vector& v);

/// x + lambda (a - x).
Point homothetic_image(const Point& a, const Point& center, double lambda);

// ---------------------------------------------------------------------------
// Convex hull membership.

struct HullCertificate {
  bool inside = false;
  double residual = 0.0;        // min over the simplex of |sum w_i g_i - p|
  std::vector<double> weights;  // optimal convex weights (sum 1, nonnegative)
};

/// Minimum-norm-point (Wolfe) active-set solver on the simplex.
HullCertificate in_convex_hull(const Vector& p, std::span<const Vector> gens, double tol);

/// Oracle for dim <= 3: exhaustive search over all sub-simplices with at most
/// dim+1 vertices. Exponential in the generator count; meant for tests.
HullCertificate in_convex_hull_exhaustive(const Vector& p, std::span<const Vector> gens, double tol);

// ---------------------------------------------------------------------------
// Projection onto H-polyhedra {z : <a_i, z> <= b_i}.

struct Projection {
  Point point;
  double distance = 0.0;
  double bound = 0.0;  // absolute accuracy bound on `distance`
  bool feasible = true;
};

/// Dual active-set (Goldfarb-Idnani with identity Hessian). Any dimension.
Projection project_onto_polyhedron(const Point& y, std::span<const Vector> normals, std::span<const double> offsets);

/// Face enumeration over all independent active sets of size <= dim. Exact
/// for dim <= 3; used as a cross-check oracle.
Projection project_onto_polyhedron_enumerate(const Point& y, std::span<const Vector> normals,
                                             std::span<const double> offsets);

/// Distance from v to the convex cone generated by `gens` (nonnegative least
/// squares, Lawson-Hanson).
double distance_to_conic_hull(const Vector& v, std::span<const Vector> gens);

// ---------------------------------------------------------------------------

/// Deterministic quasi-uniform unit directions. dim 1: {+1,-1}; dim 2: equally
/// spaced angles; dim 3: Fibonacci sphere; higher: seeded Gaussian samples.
std::vector<Vector> sphere_directions(std::size_t dim, std::size_t count);

/// Orthonormal basis of the orthogonal complement of span(rows) (dim <= any).
std::vector<Vector> orthogonal_complement(std::span<const Vector> rows, std::size_t dim, double tol = 1e-10);

/// Generators of {v : <n_i, v> <= 0}: plus/minus a lineality basis followed by
/// the extreme rays of the pointed part, all unit length. Ray enumeration is
/// combinatorial in the row count.
std::vector<Vector> polyhedral_cone_generators(std::span<const Vector> normals, std::size_t dim, double tol = 1e-10);

struct VertexList {
  bool bounded = false;
  std::vector<Point> vertices;
};

/// Vertices of {z : <a_i, z> <= b_i} by enumerating dim-subsets of rows.
VertexList polyhedron_vertices(std::span<const Vector> normals, std::span<const double> offsets, std::size_t dim);

}  // namespace tangency
