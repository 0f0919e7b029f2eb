#include "tangency/cones.hpp"

#include <fmt/format.h>
#include <fmt/ranges.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <set>
#include <stdexcept>

namespace tangency::cones {

using sets::SetRep;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double active_tol(double b) { return 1e-9 * (1.0 + std::abs(b)); }

Cone make_cone(const Point& apex, ConeKind k, std::string note = {}) {
  Cone c;
  c.apex = apex;
  c.kind = k;
  c.note = std::move(note);
  return c;
}

Cone full_space_cone(const Point& apex) {
  Cone c = make_cone(apex, ConeKind::Exact, "x is interior");
  c.full_space = true;
  PolyCone piece;
  for (std::size_t i = 0; i < apex.dim(); ++i) {
    piece.gens.push_back(Vector::basis(apex.dim(), i));
    piece.gens.push_back(-Vector::basis(apex.dim(), i));
  }
  c.gens = piece.gens;
  c.pieces.push_back(std::move(piece));
  return c;
}

Cone polyhedral_piece_cone(const Point& apex, std::vector<Vector> normals) {
  for (auto& n : normals) n = n.normalized();
  std::vector<Vector> gens = polyhedral_cone_generators(normals, apex.dim());
  if (gens.empty()) return make_cone(apex, ConeKind::ApexOnly, "x is an isolated point of A");
  Cone c = make_cone(apex, ConeKind::Exact);
  c.gens = gens;
  c.pieces.push_back({std::move(normals), std::move(gens)});
  return c;
}

// ---------------------------------------------------------------------------
// Candidate directions.

struct Grid {
  std::vector<Vector> dirs;
  std::vector<std::vector<std::size_t>> nbrs;
  double res = 0.0;  // largest nearest-neighbour angle
};

Grid build_grid(std::size_t dim, std::size_t count) {
  Grid g;
  g.dirs = sphere_directions(dim, count);
  const std::size_t n = g.dirs.size();
  g.nbrs.resize(n);
  if (dim == 1) {
    g.nbrs[0] = {1};
    g.nbrs[1] = {0};
    g.res = std::numbers::pi;
    return g;
  }
  if (dim == 2) {
    for (std::size_t i = 0; i < n; ++i) g.nbrs[i] = {(i + 1) % n, (i + n - 1) % n};
    g.res = 2.0 * std::numbers::pi / static_cast<double>(n);
    return g;
  }
  const std::size_t k = std::min<std::size_t>(n - 1, 2 * dim);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::pair<double, std::size_t>> near;
    near.reserve(n);
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) near.emplace_back(-dot(g.dirs[i], g.dirs[j]), j);
    std::partial_sort(near.begin(), near.begin() + static_cast<std::ptrdiff_t>(k), near.end());
    for (std::size_t m = 0; m < k; ++m) g.nbrs[i].push_back(near[m].second);
    g.res = std::max(g.res, std::acos(std::clamp(-near[0].first, -1.0, 1.0)));
  }
  return g;
}

const Grid& sphere_grid(std::size_t dim, std::size_t count) {
  static std::mutex mu;
  static std::map<std::pair<std::size_t, std::size_t>, Grid> cache;
  std::lock_guard lock(mu);
  auto it = cache.find({dim, count});
  if (it == cache.end()) it = cache.emplace(std::pair{dim, count}, build_grid(dim, count)).first;
  return it->second;
}

class DirectionSet {
 public:
  void add(const Vector& v) {
    const double n = v.norm();
    if (!(n > 0.0) || !std::isfinite(n)) return;
    Vector u = v / n;
    std::vector<long long> key(u.dim());
    for (std::size_t i = 0; i < u.dim(); ++i) key[i] = std::llround(u[i] * 1e9);
    if (seen_.insert(std::move(key)).second) dirs_.push_back(std::move(u));
  }
  const std::vector<Vector>& dirs() const { return dirs_; }

 private:
  std::set<std::vector<long long>> seen_;
  std::vector<Vector> dirs_;
};

void patch_tangents(const SetRep& a, const sets::ParamPatch& p, const Point& x, DirectionSet& out) {
  const sets::ParamNearest pn = sets::nearest_parameter(a, x);
  if (!(pn.distance <= 1e-6 * (1.0 + x.as_vector().norm()))) return;
  const std::size_t k = p.domain.size();
  const std::vector<double>& t0 = pn.t;

  std::vector<std::vector<double>> jac;
  try {
    for (const auto& comp : p.map) jac.push_back(exprs::grad(comp, t0));
  } catch (const std::exception&) {
    jac.clear();
  }

  const std::vector<Vector> ws = k == 1 ? std::vector<Vector>{Vector{1.0}, Vector{-1.0}} : sphere_directions(k, 32);
  const Point base = sets::patch_point(a, t0);
  for (const Vector& w : ws) {
    bool feasible = true;
    for (std::size_t c = 0; c < k; ++c) {
      const auto [lo, hi] = p.domain[c];
      const double slack = 1e-12 * (hi - lo);
      if ((t0[c] <= lo + slack && w[c] < 0.0) || (t0[c] >= hi - slack && w[c] > 0.0)) feasible = false;
    }
    if (!feasible) continue;
    if (!jac.empty()) {
      Vector v(p.map.size());
      for (std::size_t i = 0; i < jac.size(); ++i)
        for (std::size_t c = 0; c < k; ++c) v[i] += jac[i][c] * w[c];
      out.add(v);
    }
    for (double h : {0x1p-12, 0x1p-24, 0x1p-36}) {
      std::vector<double> t = t0;
      for (std::size_t c = 0; c < k; ++c)
        t[c] = std::clamp(t0[c] + h * (p.domain[c].second - p.domain[c].first) * w[c], p.domain[c].first,
                          p.domain[c].second);
      out.add(sets::patch_point(a, t) - base);
    }
  }
}

void collect_specials(const SetRep& a, const Point& x, DirectionSet& out) {
  std::visit(Overloaded{
                 [&](const sets::PointCloud& c) {
                   for (const auto& q : c.points) out.add(q - x);
                 },
                 [&](const sets::HPolyhedron&) {
                   if (const VertexList* vl = a.vertices())
                     for (const auto& v : vl->vertices) out.add(v - x);
                 },
                 [&](const sets::ParamPatch& p) { patch_tangents(a, p, x, out); },
                 [&](const sets::Union& u) {
                   for (const auto& m : u.members) collect_specials(m, x, out);
                 },
                 [](const auto&) {},
             },
             a.variant());
}

// ---------------------------------------------------------------------------
// Direction scans.

struct Decision {
  bool accept = false;
  bool ambiguous = false;
};
using Acceptor = std::function<Decision(const Vector&)>;

struct Scan {
  std::vector<Vector> accepted;  // specials, then grid, then refined boundary points
  std::size_t specials = 0;      // leading accepted entries that are special candidates
  bool full = false;
  bool ambiguous = false;
  double res = 0.0;
};

Scan scan_directions(const SetRep& a, const Point& x, const BlowUpParams& p, const Acceptor& acc) {
  const std::size_t dim = x.dim();
  const Grid& grid = sphere_grid(dim, p.grid_size(dim));
  DirectionSet specials;
  for (std::size_t i = 0; i < dim; ++i) {
    specials.add(Vector::basis(dim, i));
    specials.add(-Vector::basis(dim, i));
  }
  collect_specials(a, x, specials);

  Scan s;
  s.res = grid.res;
  bool all = true;
  for (const Vector& u : specials.dirs()) {
    const Decision d = acc(u);
    s.ambiguous = s.ambiguous || d.ambiguous;
    if (d.accept)
      s.accepted.push_back(u);
    else
      all = false;
  }
  s.specials = s.accepted.size();
  std::vector<char> ok(grid.dirs.size(), 0);
  for (std::size_t i = 0; i < grid.dirs.size(); ++i) {
    const Decision d = acc(grid.dirs[i]);
    s.ambiguous = s.ambiguous || d.ambiguous;
    ok[i] = d.accept ? 1 : 0;
    if (d.accept)
      s.accepted.push_back(grid.dirs[i]);
    else
      all = false;
  }
  s.full = all;
  if (all) return s;

  // Bisect along great-circle arcs between accepted and rejected neighbours.
  std::set<std::pair<std::size_t, std::size_t>> done;
  for (std::size_t i = 0; i < grid.dirs.size(); ++i) {
    if (!ok[i]) continue;
    for (std::size_t j : grid.nbrs[i]) {
      if (ok[j] || !done.insert({i, j}).second) continue;
      Vector in = grid.dirs[i], out = grid.dirs[j];
      bool moved = false;
      for (int it = 0; it < 14; ++it) {
        const Vector m = in + out;
        if (m.norm() < 1e-12) break;
        const Vector mid = m.normalized();
        if (acc(mid).accept) {
          in = mid;
          moved = true;
        } else {
          out = mid;
        }
      }
      if (moved) s.accepted.push_back(in);
    }
  }
  return s;
}

/// Farthest-first seeds, first point first; stops when every point is within
/// radius. The leading `priority` points are exhausted before the rest.
std::vector<Vector> cluster(const std::vector<Vector>& pts, double radius, std::size_t priority = 0) {
  std::vector<Vector> seeds;
  if (pts.empty()) return seeds;
  const double cos_r = std::cos(radius);
  std::vector<double> best(pts.size(), -kInf);
  std::size_t next = 0;
  while (true) {
    seeds.push_back(pts[next]);
    for (std::size_t i = 0; i < pts.size(); ++i) best[i] = std::max(best[i], dot(pts[i], pts[next]));
    const auto head = best.begin() + static_cast<std::ptrdiff_t>(std::min(priority, pts.size()));
    const auto pick = head != best.begin() && *std::min_element(best.begin(), head) < cos_r
                          ? std::min_element(best.begin(), head)
                          : std::min_element(best.begin(), best.end());
    next = static_cast<std::size_t>(pick - best.begin());
    if (best[next] >= cos_r) break;
  }
  return seeds;
}

struct TailBlowUps {
  std::vector<double> lambdas;
  std::vector<SetRep> sets;
};

TailBlowUps tail_blowups(const SetRep& a, const Point& x, const setlimits::Schedule& s) {
  TailBlowUps t;
  for (std::size_t j = s.tail_begin(); j < s.size(); ++j) {
    t.lambdas.push_back(s.lambdas[j]);
    t.sets.push_back(sets::homothety(a, x, s.lambdas[j]));
  }
  return t;
}

std::vector<double> federer_epsilons(const BlowUpParams& p) {
  std::vector<double> eps = p.federer_eps;
  if (eps.empty())
    for (int k = 3; k <= 20; ++k) eps.push_back(std::ldexp(1.0, -k));
  std::sort(eps.begin(), eps.end());
  return eps;
}

enum class Mode { Upper, Lower, Federer, Contingent };

Acceptor make_acceptor(const SetRep& a, const Point& x, const BlowUpParams& p, Mode mode,
                       std::shared_ptr<const TailBlowUps> tail) {
  const double tau = p.distance_tol, kappa = p.curvature_slack;
  switch (mode) {
    case Mode::Upper:
      return [=](const Vector& u) {
        const Point y = x + u;
        Decision d;
        for (std::size_t j = 0; j < tail->sets.size(); ++j) {
          const sets::Distance dist = sets::distance_to_set(y, tail->sets[j]);
          d.ambiguous = d.ambiguous || dist.bound > tau;
          if (dist.value <= tau + kappa / tail->lambdas[j]) {
            d.accept = true;
            break;
          }
        }
        return d;
      };
    case Mode::Lower:
      return [=](const Vector& u) {
        const Point y = x + u;
        Decision d{true, false};
        for (std::size_t j = 0; j < tail->sets.size(); ++j) {
          const sets::Distance dist = sets::distance_to_set(y, tail->sets[j]);
          d.ambiguous = d.ambiguous || dist.bound > tau;
          if (dist.value > tau + kappa / tail->lambdas[j]) {
            d.accept = false;
            break;
          }
        }
        return d;
      };
    case Mode::Federer: {
      const std::vector<double> eps = federer_epsilons(p);
      return [=, &a](const Vector& u) {
        Decision d{true, false};
        for (double e : eps) {
          bool witness = false;
          for (int i = 1; i <= 12 && !witness; ++i) {
            const double r = e * std::exp2(-0.25 * i);
            const sets::Distance dist = sets::distance_to_set(x + r * u, a);
            const double thr = std::min(e - r, 0.5 * r * e);
            d.ambiguous = d.ambiguous || std::abs(dist.value - thr) <= dist.bound;
            witness = dist.value < thr;
          }
          if (!witness) {
            d.accept = false;
            break;
          }
        }
        return d;
      };
    }
    case Mode::Contingent:
      return [=, &a](const Vector& u) {
        Decision d;
        for (std::size_t j = 0; j < tail->lambdas.size() && !d.accept; ++j) {
          const double rho = 1.0 / tail->lambdas[j];
          for (int i = 0; i < 4; ++i) {
            const double r = rho * std::exp2(-0.25 * i);
            const sets::Distance dist = sets::distance_to_set(x + r * u, a);
            const double thr = r * std::sin(std::min(tau + kappa * rho, std::numbers::pi / 2));
            d.ambiguous = d.ambiguous || std::abs(dist.value - thr) <= dist.bound;
            if (dist.value <= thr) {
              d.accept = true;
              break;
            }
          }
        }
        return d;
      };
  }
  throw std::logic_error("unknown scan mode");
}

double resolution(const BlowUpParams& p) { return 1.0 / p.schedule.lambdas[p.schedule.tail_begin()]; }

/// Shared prelude: empty cone when x is outside cl A.
std::optional<Cone> outside_closure(const SetRep& a, const Point& x, const Point& apex, const BlowUpParams& p) {
  const sets::Distance d = sets::distance_to_set(x, a);
  if (d.value <= p.distance_tol) return std::nullopt;
  Cone c = make_cone(apex, ConeKind::Empty, fmt::format("x is at distance {:.6g} from A", d.value));
  c.inconclusive = d.bound > p.distance_tol;
  return c;
}

Cone sampled_cone(const SetRep& a, const Point& x, const BlowUpParams& p, Mode mode) {
  const Point apex = mode == Mode::Federer ? Point(x.dim()) : x;
  if (auto c = outside_closure(a, x, apex, p)) return *c;
  auto tail = std::make_shared<const TailBlowUps>(tail_blowups(a, x, p.schedule));
  const Scan s = scan_directions(a, x, p, make_acceptor(a, x, p, mode, tail));

  Cone c = make_cone(apex, ConeKind::Sampled);
  c.angular_res = s.res;
  c.inconclusive = s.ambiguous;
  if (s.accepted.empty()) {
    c.kind = ConeKind::ApexOnly;
    const bool acc = is_accumulation_point(a, x, resolution(p));
    if (!acc) {
      c.note = "x is isolated at the probed scales";
    } else if (mode == Mode::Lower) {
      c.note = "no direction survives every tail scale";
    } else {
      c.note = "no direction found at an accumulation point";
      c.inconclusive = true;
    }
    return c;
  }
  c.full_space = s.full;
  c.gens = cluster(s.accepted, 0.5 * p.angular_tol, s.specials);
  if (mode == Mode::Upper || mode == Mode::Lower) {
    const double tau = p.distance_tol, kappa = p.curvature_slack;
    for (const Vector& g : c.gens) {
      RayScales rs{kInf, 0.0};
      for (std::size_t j = 0; j < tail->sets.size(); ++j)
        if (sets::distance(x + g, tail->sets[j]) <= tau + kappa / tail->lambdas[j]) {
          rs.first = std::min(rs.first, tail->lambdas[j]);
          rs.last = std::max(rs.last, tail->lambdas[j]);
        }
      if (!std::isfinite(rs.first)) rs = {0.0, 0.0};
      c.scales.push_back(rs);
    }
  }
  return c;
}

template <class Pred>
bool all_gens(const Cone& a, Pred member, Vector* witness) {
  for (const Vector& g : a.gens)
    if (!member(g)) {
      if (witness) *witness = g;
      return false;
    }
  return true;
}

bool is_interior(const SetRep& a, const Point& x, const BlowUpParams& p) {
  if (auto c = exact_tangent_cone(a, x, p.distance_tol)) return c->full_space;
  const double rho = resolution(p);
  for (const Vector& u : sphere_directions(x.dim(), 64))
    if (sets::distance(x + rho * u, a) > p.distance_tol * rho) return false;
  return true;
}

std::optional<Point> exterior_probe(const SetRep& a, const Point& x, const BlowUpParams& p) {
  for (double s : {1.0, 4.0, 16.0, 256.0, 65536.0, 1e9})
    for (std::size_t i = 0; i < x.dim(); ++i)
      for (double sign : {1.0, -1.0}) {
        const Point z = x + (sign * s) * Vector::basis(x.dim(), i);
        if (sets::distance(z, a) > 100.0 * p.distance_tol) return z;
      }
  return std::nullopt;
}

std::optional<Point> interior_probe(const SetRep& a, const BlowUpParams& p) {
  std::optional<Point> q = std::visit(
      Overloaded{
          [&](const sets::Ball& b) -> std::optional<Point> {
            if (b.radius > 0.0) return b.center;
            return std::nullopt;
          },
          [&](const sets::HPolyhedron&) -> std::optional<Point> {
            const VertexList* vl = a.vertices();
            if (!vl || !vl->bounded || vl->vertices.empty()) return std::nullopt;
            Vector sum(a.dim());
            for (const auto& v : vl->vertices) sum += v.as_vector();
            return Point((sum / static_cast<double>(vl->vertices.size())).data());
          },
          [&](const sets::Union& u) -> std::optional<Point> {
            for (const auto& m : u.members)
              if (auto r = interior_probe(m, p)) return r;
            return std::nullopt;
          },
          [](const auto&) -> std::optional<Point> { return std::nullopt; },
      },
      a.variant());
  if (q && is_interior(a, *q, p)) return q;
  return std::nullopt;
}

void cloud_points(const SetRep& a, std::vector<Point>& out) {
  if (const auto* c = std::get_if<sets::PointCloud>(&a.variant())) out.insert(out.end(), c->points.begin(), c->points.end());
  if (const auto* u = std::get_if<sets::Union>(&a.variant()))
    for (const auto& m : u->members) cloud_points(m, out);
}

std::string coords(const Point& p) { return fmt::format("({:.6g})", fmt::join(p.coords(), ", ")); }

Verdict verdict_of(bool ok, bool inconclusive) {
  if (inconclusive) return Verdict::Inconclusive;
  return ok ? Verdict::Pass : Verdict::Fail;
}

}  // namespace

// ---------------------------------------------------------------------------

setlimits::Schedule BlowUpParams::default_schedule() {
  setlimits::Schedule s;
  for (int j = 0; j < 35; ++j) s.lambdas.push_back(std::ldexp(j % 2 ? std::numbers::sqrt2 : 1.0, 3 + j / 2));
  return s;
}

void BlowUpParams::validate() const {
  schedule.validate(8);
  if (!(angular_tol > 0.0 && angular_tol < std::numbers::pi / 4)) throw std::invalid_argument("angular_tol must lie in (0, pi/4)");
  if (!(distance_tol > 0.0)) throw std::invalid_argument("distance_tol must be positive");
  if (!(curvature_slack >= 0.0)) throw std::invalid_argument("curvature_slack must be nonnegative");
  for (double e : federer_eps)
    if (!(e > 0.0 && e < 1.0)) throw std::invalid_argument("federer epsilons must lie in (0, 1)");
}

std::size_t BlowUpParams::grid_size(std::size_t dim) const {
  if (dim == 1) return 2;
  if (samples_per_scale > 0) return samples_per_scale;
  if (dim == 2) return 720;
  if (dim == 3) return 1500;
  return 4000;
}

const char* to_string(ConeKind k) {
  switch (k) {
    case ConeKind::Empty: return "empty";
    case ConeKind::ApexOnly: return "apex";
    case ConeKind::Exact: return "exact";
    case ConeKind::Sampled: return "sampled";
  }
  return "?";
}

std::vector<Vector> Cone::ineqs() const {
  if (kind == ConeKind::Exact && pieces.size() == 1) return pieces.front().normals;
  return {};
}

std::optional<Cone> exact_tangent_cone(const SetRep& a, const Point& x, double tau) {
  detail::require_same(x.dim(), a.dim());
  return std::visit(
      Overloaded{
          [&](const sets::EmptySet&) -> std::optional<Cone> { return make_cone(x, ConeKind::Empty, "A is empty"); },
          [&](const sets::HPolyhedron& h) -> std::optional<Cone> {
            const Projection pr = project_onto_polyhedron(x, h.normals, h.offsets);
            if (!pr.feasible) return make_cone(x, ConeKind::Empty, "A is empty");
            if (pr.distance > tau)
              return make_cone(x, ConeKind::Empty, fmt::format("x is at distance {:.6g} from A", pr.distance));
            std::vector<Vector> active;
            for (std::size_t i = 0; i < h.normals.size(); ++i)
              if (dot(h.normals[i], x.as_vector()) - h.offsets[i] >= -active_tol(h.offsets[i]))
                active.push_back(h.normals[i]);
            if (active.empty()) return full_space_cone(x);
            return polyhedral_piece_cone(x, std::move(active));
          },
          [&](const sets::Ball& b) -> std::optional<Cone> {
            const Vector off = x - b.center;
            const double d = off.norm();
            if (b.radius == 0.0) {
              if (b.closed && d <= tau) return make_cone(x, ConeKind::ApexOnly, "A is the single point x");
              return make_cone(x, ConeKind::Empty, b.closed ? "x is not in A" : "A is empty");
            }
            if (d > b.radius + tau)
              return make_cone(x, ConeKind::Empty, fmt::format("x is at distance {:.6g} from A", d - b.radius));
            if (d < b.radius - active_tol(b.radius)) return full_space_cone(x);
            return polyhedral_piece_cone(x, {off});
          },
          [&](const sets::Union& u) -> std::optional<Cone> {
            std::vector<PolyCone> pieces;
            bool apex = false;
            for (const auto& m : u.members) {
              const std::optional<Cone> sub = exact_tangent_cone(m, x, tau);
              if (!sub) {
                if (sets::distance(x, m) > tau) continue;
                return std::nullopt;
              }
              if (sub->kind == ConeKind::ApexOnly) apex = true;
              if (sub->kind == ConeKind::Exact) pieces.insert(pieces.end(), sub->pieces.begin(), sub->pieces.end());
            }
            if (pieces.empty())
              return apex ? make_cone(x, ConeKind::ApexOnly, "x is an isolated point of A")
                          : make_cone(x, ConeKind::Empty, "x is not in the closure of any member");
            Cone c = make_cone(x, ConeKind::Exact);
            DirectionSet gens;
            for (const auto& pc : pieces) {
              c.full_space = c.full_space || pc.normals.empty();
              for (const auto& g : pc.gens) gens.add(g);
            }
            c.gens = gens.dirs();
            c.pieces = std::move(pieces);
            if (c.full_space) c.note = "x is interior";
            return c;
          },
          [](const auto&) -> std::optional<Cone> { return std::nullopt; },
      },
      a.variant());
}

Cone upper_tangent_cone(const SetRep& a, const Point& x, const BlowUpParams& p) {
  detail::require_same(x.dim(), a.dim());
  p.validate();
  if (!p.force_sampled)
    if (auto c = exact_tangent_cone(a, x, p.distance_tol)) return *c;
  return sampled_cone(a, x, p, Mode::Upper);
}

Cone lower_tangent_cone(const SetRep& a, const Point& x, const BlowUpParams& p) {
  detail::require_same(x.dim(), a.dim());
  p.validate();
  return sampled_cone(a, x, p, Mode::Lower);
}

Cone federer_cone(const SetRep& a, const Point& x, const BlowUpParams& p) {
  detail::require_same(x.dim(), a.dim());
  p.validate();
  return sampled_cone(a, x, p, Mode::Federer);
}

Contingent contingent_directions(const SetRep& a, const Point& x, const BlowUpParams& p) {
  detail::require_same(x.dim(), a.dim());
  p.validate();
  Contingent out;
  out.accumulation = is_accumulation_point(a, x, resolution(p));
  if (!out.accumulation) {
    out.note = "x is not an accumulation point of A";
    return out;
  }
  auto tail = std::make_shared<const TailBlowUps>(tail_blowups(a, x, p.schedule));
  const Scan s = scan_directions(a, x, p, make_acceptor(a, x, p, Mode::Contingent, tail));
  out.inconclusive = s.ambiguous;
  out.directions = cluster(s.accepted, 0.5 * p.angular_tol, s.specials);
  if (out.directions.empty()) {
    out.inconclusive = true;
    out.note = "no tangent half-line found at an accumulation point";
  }
  return out;
}

bool direction_member(const Cone& c, const Vector& v, double tol_ang) {
  detail::require_same(c.dim(), v.dim());
  if (c.kind == ConeKind::Empty) return false;
  const double n = v.norm();
  if (n == 0.0) return true;
  if (c.kind == ConeKind::ApexOnly) return false;
  if (c.full_space) return true;
  const Vector u = v / n;
  const double s = std::sin(tol_ang);
  if (c.kind == ConeKind::Exact) {
    return std::any_of(c.pieces.begin(), c.pieces.end(), [&](const PolyCone& pc) {
      return std::all_of(pc.normals.begin(), pc.normals.end(), [&](const Vector& nv) { return dot(nv, u) <= s; });
    });
  }
  double best = -1.0;
  for (const auto& g : c.gens) best = std::max(best, dot(g, u));
  if (best >= std::cos(tol_ang)) return true;
  const double local = std::cos(3.0 * c.angular_res + tol_ang);
  std::vector<Vector> near;
  for (const auto& g : c.gens)
    if (dot(g, u) >= local) near.push_back(g);
  return near.size() >= 2 && distance_to_conic_hull(u, near) <= s;
}

bool cone_member(const Cone& c, const Point& y, double tol_ang) { return direction_member(c, y - c.apex, tol_ang); }

bool gens_within(const Cone& a, const Cone& b, double tol_ang, Vector* witness) {
  if (a.kind == ConeKind::Empty) return true;
  if (b.kind == ConeKind::Empty) return false;
  return all_gens(a, [&](const Vector& g) { return direction_member(b, g, tol_ang); }, witness);
}

bool is_accumulation_point(const SetRep& a, const Point& x, double res) {
  detail::require_same(x.dim(), a.dim());
  return std::visit(
      Overloaded{
          [](const sets::EmptySet&) { return false; },
          [&](const sets::PointCloud& c) {
            return std::any_of(c.points.begin(), c.points.end(), [&](const Point& q) {
              const double d = tangency::distance(q, x);
              return d > 0.0 && d <= res;
            });
          },
          [&](const sets::HPolyhedron&) {
            const auto c = exact_tangent_cone(a, x);
            return c && c->kind == ConeKind::Exact;
          },
          [&](const sets::Ball& b) { return b.radius > 0.0 && sets::distance(x, a) <= 1e-9 * (1.0 + b.radius); },
          [&](const sets::ParamPatch&) {
            if (!sets::in_closure(x, a, 1e-9 * (1.0 + x.as_vector().norm()))) return false;
            const auto pts = sets::sample(a, 16, 0);
            return std::any_of(pts.begin(), pts.end(), [&](const Point& q) { return q != pts.front(); });
          },
          [&](const sets::Union& u) {
            return std::any_of(u.members.begin(), u.members.end(),
                               [&](const SetRep& m) { return is_accumulation_point(m, x, res); });
          },
          [&](const auto&) {
            if (!sets::in_closure(x, a, 1e-9)) return false;
            for (const Vector& u : sphere_directions(x.dim(), 64))
              if (sets::distance(x + res * u, a) < res * (1.0 - 1e-6)) return true;
            return false;
          },
      },
      a.variant());
}

SetRep realize(const Cone& c, const BlowUpParams& p) {
  const std::size_t dim = c.dim();
  auto big_box = [&] {
    Vector r(dim);
    for (std::size_t i = 0; i < dim; ++i) r[i] = 1e6;
    return SetRep::box(c.apex - r, c.apex + r);
  };
  switch (c.kind) {
    case ConeKind::Empty: return SetRep::empty(dim);
    case ConeKind::ApexOnly: return SetRep::point_cloud({c.apex});
    case ConeKind::Exact: {
      std::vector<SetRep> parts;
      for (const auto& pc : c.pieces) {
        if (pc.normals.empty()) {
          parts.push_back(big_box());
          continue;
        }
        std::vector<double> offsets;
        for (const auto& n : pc.normals) offsets.push_back(dot(n, c.apex.as_vector()));
        parts.push_back(SetRep::polyhedron(pc.normals, offsets));
      }
      return parts.size() == 1 ? parts.front() : SetRep::union_of(std::move(parts));
    }
    case ConeKind::Sampled: {
      if (c.full_space) return big_box();
      std::vector<Point> pts{c.apex};
      for (std::size_t j = p.schedule.tail_begin(); j < p.schedule.size(); ++j)
        for (const auto& g : c.gens) pts.push_back(c.apex + g / p.schedule.lambdas[j]);
      return SetRep::point_cloud(std::move(pts));
    }
  }
  throw std::logic_error("unknown cone kind");
}

Report cone_property_suite(const SetRep& a, const Point& x, const std::optional<SetRep>& b_in, const BlowUpParams& p) {
  detail::require_same(x.dim(), a.dim());
  p.validate();
  const std::size_t dim = x.dim();
  const double tol = p.angular_tol;
  const double res = resolution(p);
  Report r;
  r.title = "cone properties";
  r.tolerances = {{"angular_tol", tol}, {"distance_tol", p.distance_tol}, {"curvature_slack", p.curvature_slack}};

  const Cone c = upper_tangent_cone(a, x, p);
  r.set_value("generators", static_cast<double>(c.gens.size()));
  const bool in_cl = sets::in_closure(x, a, p.distance_tol);
  const bool acc = in_cl && is_accumulation_point(a, x, res);

  // Empty outside the closure.
  if (!in_cl) {
    r.add_check("empty-outside-closure", verdict_of(c.kind == ConeKind::Empty, c.inconclusive),
                fmt::format("x outside cl A, cone is {}", to_string(c.kind)));
  } else if (const auto z = exterior_probe(a, x, p)) {
    const Cone cz = upper_tangent_cone(a, *z, p);
    const bool ok = cz.kind == ConeKind::Empty;
    if (!ok) r.witness_points.push_back(*z);
    r.add_check("empty-outside-closure", verdict_of(ok, cz.inconclusive),
                fmt::format("probe {} outside cl A, cone is {}", coords(*z), to_string(cz.kind)));
  } else {
    r.add_check("empty-outside-closure", Verdict::Pass, "no exterior point found; premise never holds");
  }

  // Isolated points give the apex alone.
  if (in_cl && !acc) {
    r.add_check("isolated-apex", verdict_of(c.kind == ConeKind::ApexOnly, c.inconclusive),
                fmt::format("x isolated, cone is {}", to_string(c.kind)));
  } else {
    std::vector<Point> pts;
    cloud_points(a, pts);
    std::optional<Point> q;
    for (const auto& pt : pts)
      if (!is_accumulation_point(a, pt, res)) {
        q = pt;
        break;
      }
    if (q) {
      const Cone cq = upper_tangent_cone(a, *q, p);
      const bool ok = cq.kind == ConeKind::ApexOnly;
      if (!ok) r.witness_points.push_back(*q);
      r.add_check("isolated-apex", verdict_of(ok, cq.inconclusive),
                  fmt::format("isolated probe {}, cone is {}", coords(*q), to_string(cq.kind)));
    } else {
      r.add_check("isolated-apex", Verdict::Pass, "A has no isolated point; premise never holds");
    }
  }

  // Accumulation points give a cone with a nonzero direction.
  if (acc) {
    const bool ok = c.kind == ConeKind::Exact || c.kind == ConeKind::Sampled;
    r.add_check("accumulation-nonempty", verdict_of(ok, c.inconclusive),
                fmt::format("cone is {} with {} nonzero generators", to_string(c.kind), c.gens.size()));
  } else {
    r.add_check("accumulation-nonempty", Verdict::Pass, "x is not an accumulation point; premise does not hold");
  }

  // Interior points give the whole space.
  if (in_cl && is_interior(a, x, p)) {
    r.add_check("interior-full-space", verdict_of(c.full_space, c.inconclusive),
                c.full_space ? "x interior, cone is the whole space" : "x interior but the cone is not the whole space");
  } else if (const auto q = interior_probe(a, p)) {
    const Cone cq = upper_tangent_cone(a, *q, p);
    if (!cq.full_space) r.witness_points.push_back(*q);
    r.add_check("interior-full-space", verdict_of(cq.full_space, cq.inconclusive),
                fmt::format("interior probe {}, cone is {}", coords(*q), cq.full_space ? "the whole space" : to_string(cq.kind)));
  } else {
    r.add_check("interior-full-space", Verdict::Pass, "no interior point found; premise never holds");
  }

  // x + R+ (y - x) stays in the cone, checked against the blow-ups themselves.
  if (c.kind == ConeKind::Exact || c.kind == ConeKind::Sampled) {
    const TailBlowUps tail = tail_blowups(a, x, p.schedule);
    const std::size_t stride = std::max<std::size_t>(1, c.gens.size() / 48);
    bool ok = true, incon = c.inconclusive;
    double worst = -kInf;
    for (std::size_t gi = 0; gi < c.gens.size() && ok; gi += stride) {
      for (double t : {0.1, 1.0, 10.0, 100.0}) {
        const Point y = x + t * c.gens[gi];
        double best = kInf, hopeful = kInf;
        // Scales t * lambda_j as well: the limit runs over all real lambda.
        for (std::size_t j = 0; j < tail.sets.size(); ++j)
          for (const double lam : {tail.lambdas[j], t * tail.lambdas[j]}) {
            const sets::Distance d =
                sets::distance_to_set(y, lam == tail.lambdas[j] ? tail.sets[j] : sets::homothety(a, x, lam));
            const double excess = d.value - (t * p.distance_tol + p.curvature_slack * (t + t * t) / lam);
            best = std::min(best, excess);
            hopeful = std::min(hopeful, excess - d.bound);
          }
        worst = std::max(worst, best);
        if (best > 0.0 || !cone_member(c, y, tol)) {
          incon = incon || (hopeful <= 0.0 && cone_member(c, y, tol));
          ok = false;
          r.witness_points.push_back(y);
          break;
        }
      }
    }
    r.add_check("ray-closed", verdict_of(ok, incon),
                fmt::format("x + t g for t in {{0.1, 1, 10, 100}}, worst excess {:.3g}", worst));
  } else {
    r.add_check("ray-closed", Verdict::Pass, "cone has no point other than x");
  }

  // Monotonicity and union additivity against B.
  Vector e1 = Vector::basis(dim, 0);
  const SetRep b = b_in ? *b_in : SetRep::union_of({a, SetRep::ball(x + 0.5 * e1, 0.5)});
  const Cone cb = upper_tangent_cone(b, x, p);
  bool contained = true;
  if (b_in) {
    try {
      for (const auto& q : sets::sample(a, 64, 7))
        if (!sets::in_closure(q, b, 1e-9)) {
          contained = false;
          break;
        }
    } catch (const std::exception&) {
    }
  }
  if (!contained) {
    r.add_check("monotone", Verdict::Pass, "A is not contained in B; premise does not hold");
  } else {
    Vector w;
    const bool ok = gens_within(c, cb, tol, &w) && (c.kind != ConeKind::ApexOnly || cb.kind != ConeKind::Empty);
    if (!ok && w.dim() > 0) r.witness_directions.push_back(w);
    r.add_check("monotone", verdict_of(ok, c.inconclusive || cb.inconclusive),
                fmt::format("{} generators of Tang(A,x) checked in Tang(B,x)", c.gens.size()));
  }

  {
    const Cone cu = upper_tangent_cone(SetRep::union_of({a, b}), x, p);
    Vector w;
    auto in_either = [&](const Vector& g) { return direction_member(c, g, tol) || direction_member(cb, g, tol); };
    const bool kinds = (cu.kind == ConeKind::Empty) == (c.kind == ConeKind::Empty && cb.kind == ConeKind::Empty);
    const bool ok = kinds && all_gens(cu, in_either, &w) && gens_within(c, cu, tol, &w) && gens_within(cb, cu, tol, &w);
    if (!ok && w.dim() > 0) r.witness_directions.push_back(w);
    r.add_check("union-additive", verdict_of(ok, c.inconclusive || cb.inconclusive || cu.inconclusive),
                fmt::format("Tang(A u B) has {} generators, Tang(A) {} and Tang(B) {}", cu.gens.size(), c.gens.size(),
                            cb.gens.size()));
  }

  // Idempotence through a realization of the cone.
  {
    const Cone c2 = upper_tangent_cone(realize(c, p), x, p);
    Vector w;
    const bool ok = (c.kind == ConeKind::Empty) == (c2.kind == ConeKind::Empty) &&
                    (c.kind == ConeKind::ApexOnly) == (c2.kind == ConeKind::ApexOnly) && gens_within(c, c2, tol, &w) &&
                    gens_within(c2, c, tol, &w);
    if (!ok && w.dim() > 0) r.witness_directions.push_back(w);
    r.add_check("idempotent", verdict_of(ok, c.inconclusive || c2.inconclusive),
                fmt::format("cone of the realized cone is {} with {} generators", to_string(c2.kind), c2.gens.size()));
  }

  r.settle();
  std::size_t passed = 0;
  for (const auto& ch : r.checks) passed += ch.verdict == Verdict::Pass;
  r.message = fmt::format("{} of {} properties pass", passed, r.checks.size());
  return r;
}

Report formulation_check(const SetRep& a, const Point& x, const BlowUpParams& p) {
  detail::require_same(x.dim(), a.dim());
  p.validate();
  return formulation_check(upper_tangent_cone(a, x, p), lower_tangent_cone(a, x, p), federer_cone(a, x, p),
                           contingent_directions(a, x, p), p);
}

Report formulation_check(const Cone& up, const Cone& lo, const Cone& tan, const Contingent& k,
                         const BlowUpParams& p) {
  const double tol = p.angular_tol;
  Report r;
  r.title = "cone formulations";
  r.tolerances = {{"angular_tol", tol}, {"distance_tol", p.distance_tol}, {"curvature_slack", p.curvature_slack}};
  r.set_value("upper_generators", static_cast<double>(up.gens.size()));
  r.set_value("lower_generators", static_cast<double>(lo.gens.size()));
  r.set_value("federer_generators", static_cast<double>(tan.gens.size()));
  r.set_value("contingent_directions", static_cast<double>(k.directions.size()));

  Vector w;
  bool ok = gens_within(lo, up, tol, &w);
  if (!ok) r.witness_directions.push_back(w);
  r.add_check("lower cone inside upper cone", verdict_of(ok, lo.inconclusive || up.inconclusive),
              fmt::format("{} lower generators, {} upper", lo.gens.size(), up.gens.size()));

  ok = gens_within(up, tan, tol, &w) && gens_within(tan, up, tol, &w);
  if (!ok) r.witness_directions.push_back(w);
  r.add_check("upper cone = x + Federer cone", verdict_of(ok, up.inconclusive || tan.inconclusive),
              fmt::format("{} vs {} generators", up.gens.size(), tan.gens.size()));

  if (k.accumulation) {
    Cone kc = tan;
    kc.gens = k.directions;
    ok = gens_within(kc, tan, tol, &w) && gens_within(tan, kc, tol, &w);
    if (!ok) r.witness_directions.push_back(w);
    r.add_check("contingent directions = Federer directions", verdict_of(ok, k.inconclusive || tan.inconclusive),
                fmt::format("{} contingent directions", k.directions.size()));
  } else {
    r.add_check("contingent directions = Federer directions",
                verdict_of(tan.kind == ConeKind::ApexOnly || tan.kind == ConeKind::Empty, tan.inconclusive),
                fmt::format("x not an accumulation point; Federer cone is {}", to_string(tan.kind)));
  }
  r.settle();
  return r;
}

}  // namespace tangency::cones
