#pragma once

// Tangent cones of sets at a point.
//
// Tang(A,x) (upper) and tang(A,x) (lower) are the upper and lower limits of
// the blow-ups x + lambda (A - x); Tan(A,x) is the vector cone of limiting
// secant directions, and the contingent directions are the tangent
// half-lines at an accumulation point.
//
// Polyhedra, balls and their unions get exact cones (active rows). Every other
// set is probed along candidate unit directions u: u is kept when the point
// x + u is close to the blown-up sets on the tail of a finite scale schedule.

#include <optional>
#include <string>
#include <vector>

#include "tangency/report.hpp"
#include "tangency/setlimits.hpp"
#include "tangency/sets.hpp"

namespace tangency::cones {

struct BlowUpParams {
  /// 2^(3 + j/2), j = 0..34.
  static setlimits::Schedule default_schedule();

  setlimits::Schedule schedule = default_schedule();
  /// Sphere grid size for candidate directions; 0 picks a size by dimension.
  std::size_t samples_per_scale = 0;
  double angular_tol = 1e-2;
  /// tau0: base acceptance distance in the blown-up picture.
  double distance_tol = 1e-7;
  /// kappa: u is accepted at scale lambda when d(x+u, A_lambda) <= tau0 + kappa/lambda.
  double curvature_slack = 1.0;
  /// Federer epsilons; empty means 2^-3 .. 2^-20.
  std::vector<double> federer_eps;
  /// Skip the exact path even where one exists.
  bool force_sampled = false;

  void validate() const;
  std::size_t grid_size(std::size_t dim) const;
};

enum class ConeKind { Empty, ApexOnly, Exact, Sampled };
const char* to_string(ConeKind k);

/// {v : <n, v> <= 0 for n in normals}; gens are its unit generators.
struct PolyCone {
  std::vector<Vector> normals;
  std::vector<Vector> gens;
};

struct RayScales {
  double first = 0.0;  // smallest tail scale at which the ray was observed
  double last = 0.0;
};

struct Cone {
  Point apex;
  ConeKind kind = ConeKind::Empty;
  /// Unit generators (exact) or direction clusters (sampled).
  std::vector<Vector> gens;
  /// Exact cones: union of polyhedral cones.
  std::vector<PolyCone> pieces;
  /// Sampled cones: per generator, parallel to gens.
  std::vector<RayScales> scales;
  double angular_res = 0.0;
  bool full_space = false;
  bool inconclusive = false;
  std::string note;

  bool exact() const { return kind == ConeKind::Exact; }
  /// Normals of a single-piece exact cone; empty otherwise.
  std::vector<Vector> ineqs() const;
  std::size_t dim() const { return apex.dim(); }
};

Cone upper_tangent_cone(const sets::SetRep& a, const Point& x, const BlowUpParams& p = {});
Cone lower_tangent_cone(const sets::SetRep& a, const Point& x, const BlowUpParams& p = {});
/// Vector cone with apex at the origin.
Cone federer_cone(const sets::SetRep& a, const Point& x, const BlowUpParams& p = {});

struct Contingent {
  std::vector<Vector> directions;
  bool accumulation = false;
  bool inconclusive = false;
  std::string note;
};
Contingent contingent_directions(const sets::SetRep& a, const Point& x, const BlowUpParams& p = {});

/// Exact cone for polyhedra, balls, empty sets and unions of these; nullopt
/// when a sampled cone is needed.
std::optional<Cone> exact_tangent_cone(const sets::SetRep& a, const Point& x, double distance_tol = 1e-7);

bool cone_member(const Cone& c, const Point& y, double tol_ang);
/// Membership of apex + v.
bool direction_member(const Cone& c, const Vector& v, double tol_ang);

/// True when points of A other than x lie within `resolution` of x.
bool is_accumulation_point(const sets::SetRep& a, const Point& x, double resolution);

/// A set whose tangent cone at the apex is the cone itself: polyhedra for exact
/// cones, rays sampled at the tail radii 1/lambda for sampled cones.
sets::SetRep realize(const Cone& c, const BlowUpParams& p = {});

/// The eight cone properties, one check each. B defaults to
/// A union ball(x + e1/2, 1/2).
Report cone_property_suite(const sets::SetRep& a, const Point& x, const std::optional<sets::SetRep>& b = std::nullopt,
                           const BlowUpParams& p = {});

/// lower inside upper, upper = x + Federer, contingent = nonzero Federer
/// directions; one check each.
Report formulation_check(const sets::SetRep& a, const Point& x, const BlowUpParams& p = {});
/// Same checks on cones already computed with `p`.
Report formulation_check(const Cone& upper, const Cone& lower, const Cone& federer, const Contingent& k,
                         const BlowUpParams& p);

/// Every generator of `a` is a member of `b` within tol_ang (apexes must agree
/// up to translation; vector cones compare directly).
bool gens_within(const Cone& a, const Cone& b, double tol_ang, Vector* witness = nullptr);

}  // namespace tangency::cones
