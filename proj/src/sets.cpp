#include "tangency/sets.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

namespace tangency::sets {

namespace {
constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kInf = std::numeric_limits<double>::infinity();
}  // namespace

struct SetRep::Data {
  std::size_t dim = 0;
  Variant v;
  std::vector<Homothety> transforms;
  std::optional<VertexList> verts;
  std::vector<Point> nodes;  // patch: base images of the grid nodes
  std::vector<Point> seeds;  // sublevel: points of the base set found in the box
};

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

Point eval_patch_base(const ParamPatch& p, std::span<const double> t) {
  std::vector<double> c(p.map.size());
  for (std::size_t i = 0; i < p.map.size(); ++i) c[i] = p.map[i].eval(t);
  return Point(std::move(c));
}

Point apply_forward(const std::vector<Homothety>& ts, Point p) {
  for (const auto& h : ts) p = homothetic_image(p, h.center, h.lambda);
  return p;
}

Point apply_inverse(const std::vector<Homothety>& ts, Point q) {
  for (auto it = ts.rbegin(); it != ts.rend(); ++it) q = it->center + (q - it->center) / it->lambda;
  return q;
}

double total_scale(const std::vector<Homothety>& ts) {
  double s = 1.0;
  for (const auto& h : ts) s *= h.lambda;
  return s;
}

// Rounding introduced by mapping a query back through the transforms, measured
// in the transformed space.
double inverse_rounding(const std::vector<Homothety>& ts, const Point& y) {
  double acc = 0.0;
  double s = 1.0;
  for (auto it = ts.rbegin(); it != ts.rend(); ++it) {
    acc += 4.0 * kEps * (it->center.as_vector().norm() + y.as_vector().norm() / s) * s;
    s *= it->lambda;
  }
  return acc;
}

std::vector<double> grid_param(const ParamPatch& p, std::size_t flat) {
  const std::size_t k = p.domain.size();
  const auto g = static_cast<std::size_t>(p.grid);
  std::vector<double> t(k);
  for (std::size_t j = 0; j < k; ++j) {
    const std::size_t idx = flat % g;
    flat /= g;
    const auto [lo, hi] = p.domain[j];
    t[j] = g == 1 ? lo : lo + (hi - lo) * static_cast<double>(idx) / static_cast<double>(g - 1);
  }
  return t;
}

std::size_t grid_count(const ParamPatch& p) {
  std::size_t n = 1;
  for (std::size_t j = 0; j < p.domain.size(); ++j) n *= static_cast<std::size_t>(p.grid);
  return n;
}

struct PatchSearch {
  Distance d;
  std::vector<double> t;
};

PatchSearch patch_base_search(const ParamPatch& p, const std::vector<Point>& nodes, const Point& y) {
  const std::size_t k = p.domain.size();
  // Coarse scan, keeping the three best nodes.
  std::array<std::pair<double, std::size_t>, 3> best;
  best.fill({kInf, 0});
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const double d = (nodes[i] - y).norm_squared();
    if (d < best[2].first) {
      best[2] = {d, i};
      std::sort(best.begin(), best.end());
    }
  }
  PatchSearch out{{kInf, 0.0}, {}};
  std::vector<double> cell(k);
  for (std::size_t j = 0; j < k; ++j)
    cell[j] = (p.domain[j].second - p.domain[j].first) / std::max(1, p.grid - 1);

  for (const auto& [d0, node] : best) {
    if (!std::isfinite(d0)) continue;
    std::vector<double> t = grid_param(p, node);
    double f = d0;
    std::vector<double> step = cell;
    // Compass search with step halving, clamped to the domain box.
    for (int it = 0; it < 600; ++it) {
      bool moved = false;
      for (std::size_t j = 0; j < k; ++j) {
        for (double sgn : {1.0, -1.0}) {
          std::vector<double> tt = t;
          tt[j] = std::clamp(t[j] + sgn * step[j], p.domain[j].first, p.domain[j].second);
          if (tt[j] == t[j]) continue;
          const double ft = (eval_patch_base(p, tt) - y).norm_squared();
          if (ft < f) {
            f = ft;
            t = std::move(tt);
            moved = true;
            break;
          }
        }
      }
      if (!moved) {
        bool tiny = true;
        for (std::size_t j = 0; j < k; ++j) {
          step[j] *= 0.5;
          if (step[j] > 4.0 * kEps * std::max(std::abs(t[j]), 1e-12 * cell[j])) tiny = false;
        }
        if (tiny) break;
      }
    }
    const double d = std::sqrt(f);
    if (d < out.d.value) {
      const Point at = eval_patch_base(p, t);
      double res = 0.0;
      for (std::size_t j = 0; j < k; ++j) {
        std::vector<double> tt = t;
        tt[j] = std::clamp(t[j] + step[j], p.domain[j].first, p.domain[j].second);
        res = std::max(res, (eval_patch_base(p, tt) - at).norm());
      }
      out.d = {d, res + 8.0 * kEps * (1.0 + at.as_vector().norm())};
      out.t = t;
    }
  }
  return out;
}

Vector field_gradient(const ScalarField& f, const Point& x) {
  if (auto g = f.analytic_gradient(x)) return *g;
  Vector g(x.dim());
  for (std::size_t i = 0; i < x.dim(); ++i) {
    const double h = 1e-7 * (1.0 + std::abs(x[i]));
    Point xp = x, xm = x;
    xp[i] += h;
    xm[i] -= h;
    g[i] = (f(xp) - f(xm)) / (2.0 * h);
  }
  return g;
}

// Newton steps along the gradient onto {f = level}.
Point project_to_level(const Sublevel& s, Point z) {
  for (int it = 0; it < 60; ++it) {
    const double r = s.field(z) - s.level;
    if (std::abs(r) <= 1e-14 * (1.0 + std::abs(s.level))) break;
    const Vector g = field_gradient(s.field, z);
    const double gg = g.norm_squared();
    if (!(gg > 0.0)) break;
    z = z - (r / gg) * g;
  }
  return z;
}

Distance sublevel_base_distance(const Sublevel& s, const std::vector<Point>& seeds, const Point& y) {
  if (s.field(y) <= s.level) return {0.0, 0.0};

  std::vector<Point> starts;
  std::vector<std::pair<double, std::size_t>> order;
  for (std::size_t i = 0; i < seeds.size(); ++i) order.emplace_back((seeds[i] - y).norm(), i);
  std::sort(order.begin(), order.end());
  for (std::size_t i = 0; i < std::min<std::size_t>(4, order.size()); ++i) {
    // Bisect the segment [seed, y] for a boundary point.
    Point in = seeds[order[i].second];
    Point out = y;
    for (int it = 0; it < 80; ++it) {
      const Point mid = in + 0.5 * (out - in);
      (s.field(mid) <= s.level ? in : out) = mid;
    }
    starts.push_back(in);
  }
  starts.push_back(project_to_level(s, y));

  Distance best{kInf, 0.0};
  for (Point b : starts) {
    if (!b.finite()) continue;
    double step = 1.0;
    for (int it = 0; it < 200; ++it) {
      const Vector g = field_gradient(s.field, b);
      const double gn = g.norm();
      if (!(gn > 0.0)) break;
      const Vector n = g / gn;
      const Vector r = y - b;
      const Vector t = r - dot(r, n) * n;
      if (t.norm() <= 1e-15 * (1.0 + b.as_vector().norm())) break;
      const Point c = project_to_level(s, b + step * t);
      if ((y - c).norm() < (y - b).norm()) {
        b = c;
        step = std::min(1.0, 2.0 * step);
      } else {
        step *= 0.5;
        if (step < 1e-12) break;
      }
    }
    const double d = (y - b).norm();
    if (d < best.value) {
      const Vector g = field_gradient(s.field, b);
      const double gn = g.norm();
      const double miss = gn > 0.0 ? std::abs(s.field(b) - s.level) / gn : 0.0;
      best = {d, miss + 1e-12 * (1.0 + b.as_vector().norm())};
    }
  }
  return best;
}

std::vector<std::vector<std::size_t>> active_rows(const HPolyhedron& h, const std::vector<Point>& verts) {
  std::vector<std::vector<std::size_t>> out;
  for (const auto& v : verts) {
    std::vector<std::size_t> act;
    for (std::size_t i = 0; i < h.normals.size(); ++i) {
      const double n = h.normals[i].norm();
      const double b = h.offsets[i] / n;
      if (std::abs(dot(h.normals[i], v.as_vector()) / n - b) <= 1e-9 * (1.0 + std::abs(b))) act.push_back(i);
    }
    out.push_back(std::move(act));
  }
  return out;
}

Vector gaussian_direction(std::mt19937_64& rng, std::size_t dim) {
  std::normal_distribution<double> g;
  for (;;) {
    Vector v(dim);
    for (std::size_t i = 0; i < dim; ++i) v[i] = g(rng);
    if (v.norm() > 1e-9) return v.normalized();
  }
}

}  // namespace

// ---------------------------------------------------------------------------

SetRep SetRep::empty(std::size_t dim) {
  auto d = std::make_shared<Data>();
  d->dim = dim;
  d->v = EmptySet{};
  return SetRep(d);
}

SetRep SetRep::point_cloud(std::vector<Point> points) {
  if (points.empty()) throw std::invalid_argument("point cloud must be non-empty (use the empty set)");
  auto d = std::make_shared<Data>();
  d->dim = points.front().dim();
  for (const auto& p : points) {
    detail::require_same(d->dim, p.dim());
    if (!p.finite()) throw std::invalid_argument("point cloud has a non-finite coordinate");
  }
  d->v = PointCloud{std::move(points)};
  return SetRep(d);
}

SetRep SetRep::polyhedron(std::vector<Vector> normals, std::vector<double> offsets) {
  if (normals.empty()) throw std::invalid_argument("polyhedron needs at least one row");
  if (normals.size() != offsets.size()) throw std::invalid_argument("polyhedron rows and offsets differ in count");
  auto d = std::make_shared<Data>();
  d->dim = normals.front().dim();
  for (std::size_t i = 0; i < normals.size(); ++i) {
    detail::require_same(d->dim, normals[i].dim());
    if (!(normals[i].norm() > 0.0)) throw std::invalid_argument("polyhedron row with a zero normal");
    if (!normals[i].finite() || !std::isfinite(offsets[i])) throw std::invalid_argument("non-finite polyhedron row");
  }
  if (d->dim <= 3) d->verts = polyhedron_vertices(normals, offsets, d->dim);
  d->v = HPolyhedron{std::move(normals), std::move(offsets)};
  return SetRep(d);
}

SetRep SetRep::box(const Point& lo, const Point& hi) {
  detail::require_same(lo.dim(), hi.dim());
  std::vector<Vector> normals;
  std::vector<double> offsets;
  for (std::size_t i = 0; i < lo.dim(); ++i) {
    if (!(lo[i] <= hi[i])) throw std::invalid_argument("box with lo > hi");
    normals.push_back(Vector::basis(lo.dim(), i));
    offsets.push_back(hi[i]);
    normals.push_back(-Vector::basis(lo.dim(), i));
    offsets.push_back(-lo[i]);
  }
  return polyhedron(std::move(normals), std::move(offsets));
}

SetRep SetRep::ball(Point center, double radius, bool closed) {
  if (!(radius >= 0.0) || !std::isfinite(radius)) throw std::invalid_argument("ball radius must be finite and nonnegative");
  if (!center.finite()) throw std::invalid_argument("ball center must be finite");
  auto d = std::make_shared<Data>();
  d->dim = center.dim();
  d->v = Ball{std::move(center), radius, closed};
  return SetRep(d);
}

SetRep SetRep::patch(std::vector<exprs::Expr> map, std::vector<std::pair<double, double>> domain, int grid) {
  if (map.empty()) throw std::invalid_argument("patch map must have at least one component");
  if (domain.empty()) throw std::invalid_argument("patch domain must have at least one axis");
  if (grid < 2) throw std::invalid_argument("patch grid must have at least 2 nodes per axis");
  for (const auto& [lo, hi] : domain)
    if (!(lo < hi)) throw std::invalid_argument("patch domain box is degenerate");
  for (const auto& m : map)
    if (m.dim() != static_cast<int>(domain.size()))
      throw std::invalid_argument("patch map arity differs from the domain dimension");
  auto d = std::make_shared<Data>();
  d->dim = map.size();
  ParamPatch p{std::move(map), std::move(domain), grid};
  const std::size_t n = grid_count(p);
  if (n > 4'000'000) throw std::invalid_argument("patch grid too large");
  d->nodes.reserve(n);
  for (std::size_t i = 0; i < n; ++i) d->nodes.push_back(eval_patch_base(p, grid_param(p, i)));
  d->v = std::move(p);
  return SetRep(d);
}

SetRep SetRep::sublevel(ScalarField field, double level, std::optional<Box> box) {
  auto d = std::make_shared<Data>();
  d->dim = static_cast<std::size_t>(field.dim());
  if (box) {
    detail::require_same(d->dim, box->lo.dim());
    detail::require_same(d->dim, box->hi.dim());
    std::mt19937_64 rng(0xb0c5ULL);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int tries = 0; tries < 200000 && d->seeds.size() < 256; ++tries) {
      Point p(d->dim);
      for (std::size_t i = 0; i < d->dim; ++i) p[i] = box->lo[i] + (box->hi[i] - box->lo[i]) * u(rng);
      if (field(p) <= level) d->seeds.push_back(std::move(p));
    }
  }
  d->v = Sublevel{std::move(field), level, std::move(box)};
  return SetRep(d);
}

SetRep SetRep::union_of(std::vector<SetRep> members) {
  if (members.empty()) throw std::invalid_argument("union needs at least one member");
  auto d = std::make_shared<Data>();
  d->dim = members.front().dim();
  for (const auto& m : members) detail::require_same(d->dim, m.dim());
  d->v = Union{std::move(members)};
  return SetRep(d);
}

std::size_t SetRep::dim() const { return d_->dim; }
const SetRep::Variant& SetRep::variant() const { return d_->v; }
const std::vector<Homothety>& SetRep::transforms() const { return d_->transforms; }

std::string SetRep::kind() const {
  return std::visit(Overloaded{[](const EmptySet&) { return "empty"; }, [](const PointCloud&) { return "points"; },
                               [](const HPolyhedron&) { return "polyhedron"; }, [](const Ball&) { return "ball"; },
                               [](const ParamPatch&) { return "patch"; }, [](const Sublevel&) { return "sublevel"; },
                               [](const Union&) { return "union"; }},
                    d_->v);
}

bool SetRep::is_empty() const {
  return std::visit(Overloaded{[](const EmptySet&) { return true; },
                               [this](const HPolyhedron& h) {
                                 if (d_->verts && !d_->verts->vertices.empty()) return false;
                                 const Point origin(d_->dim);
                                 return !project_onto_polyhedron(origin, h.normals, h.offsets).feasible;
                               },
                               [](const Union& u) {
                                 return std::all_of(u.members.begin(), u.members.end(),
                                                    [](const SetRep& m) { return m.is_empty(); });
                               },
                               [](const Ball& b) { return !b.closed && b.radius == 0.0; },
                               [](const auto&) { return false; }},
                    d_->v);
}

bool SetRep::is_exact() const {
  return std::visit(Overloaded{[](const ParamPatch&) { return false; }, [](const Sublevel&) { return false; },
                               [](const Union& u) {
                                 return std::all_of(u.members.begin(), u.members.end(),
                                                    [](const SetRep& m) { return m.is_exact(); });
                               },
                               [](const auto&) { return true; }},
                    d_->v);
}

bool SetRep::bounded() const {
  return std::visit(Overloaded{[this](const HPolyhedron& h) {
                                 if (d_->verts) return d_->verts->bounded;
                                 return polyhedral_cone_generators(h.normals, d_->dim).empty();
                               },
                               [](const Sublevel& s) { return s.box.has_value(); },
                               [](const Union& u) {
                                 return std::all_of(u.members.begin(), u.members.end(),
                                                    [](const SetRep& m) { return m.bounded(); });
                               },
                               [](const auto&) { return true; }},
                    d_->v);
}

const VertexList* SetRep::vertices() const { return d_->verts ? &*d_->verts : nullptr; }

// ---------------------------------------------------------------------------

Distance distance_to_set(const Point& y, const SetRep& a) {
  detail::require_same(y.dim(), a.dim());
  const SetRep::Data& d = a.data();
  return std::visit(
      Overloaded{
          [](const EmptySet&) { return Distance{kInf, 0.0}; },
          [&](const PointCloud& c) {
            double best = kInf;
            double scale = 0.0;
            for (const auto& p : c.points) {
              const double dist = (p - y).norm();
              if (dist < best) {
                best = dist;
                scale = p.as_vector().norm();
              }
            }
            return Distance{best, 4.0 * kEps * (best + scale + y.as_vector().norm())};
          },
          [&](const HPolyhedron& h) {
            const Projection pr = project_onto_polyhedron(y, h.normals, h.offsets);
            if (!pr.feasible) return Distance{kInf, 0.0};
            return Distance{pr.distance, pr.bound};
          },
          [&](const Ball& b) {
            const double r = (y - b.center).norm();
            return Distance{std::max(0.0, r - b.radius), 4.0 * kEps * (r + b.radius + b.center.as_vector().norm())};
          },
          [&](const ParamPatch& p) {
            const Point y0 = apply_inverse(d.transforms, y);
            const Distance base = patch_base_search(p, d.nodes, y0).d;
            const double s = total_scale(d.transforms);
            return Distance{base.value * s, base.bound * s + inverse_rounding(d.transforms, y)};
          },
          [&](const Sublevel& sl) {
            const Point y0 = apply_inverse(d.transforms, y);
            const Distance base = sublevel_base_distance(sl, d.seeds, y0);
            const double s = total_scale(d.transforms);
            return Distance{base.value * s, base.bound * s + inverse_rounding(d.transforms, y)};
          },
          [&](const Union& u) {
            std::vector<Distance> ds;
            Distance best{kInf, 0.0};
            for (const auto& m : u.members) {
              ds.push_back(distance_to_set(y, m));
              best.value = std::min(best.value, ds.back().value);
            }
            // Only members that could attain the minimum contribute their bound.
            for (const auto& dm : ds)
              if (dm.value - dm.bound <= best.value) best.bound = std::max(best.bound, dm.bound);
            return best;
          },
      },
      d.v);
}

bool in_closure(const Point& y, const SetRep& a, double tol) { return distance_to_set(y, a).value <= tol; }

Point patch_point(const SetRep& a, std::span<const double> t) {
  const auto* p = std::get_if<ParamPatch>(&a.variant());
  if (!p) throw std::invalid_argument("patch_point needs a parametric patch");
  if (t.size() != p->domain.size()) throw DimensionMismatch(t.size(), p->domain.size());
  return apply_forward(a.transforms(), eval_patch_base(*p, t));
}

ParamNearest nearest_parameter(const SetRep& a, const Point& y) {
  const auto* p = std::get_if<ParamPatch>(&a.variant());
  if (!p) throw std::invalid_argument("nearest_parameter needs a parametric patch");
  detail::require_same(y.dim(), a.dim());
  const Point y0 = apply_inverse(a.transforms(), y);
  PatchSearch s = patch_base_search(*p, a.data().nodes, y0);
  return {std::move(s.t), s.d.value * total_scale(a.transforms())};
}

// ---------------------------------------------------------------------------

SetRep homothety(const SetRep& a, const Point& x, double lambda) {
  detail::require_same(x.dim(), a.dim());
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw std::invalid_argument("homothety ratio must be positive");
  if (lambda == 1.0) return a;
  auto d = std::make_shared<SetRep::Data>(*a.d_);
  std::visit(Overloaded{
                 [](EmptySet&) {},
                 [&](PointCloud& c) {
                   for (auto& p : c.points) p = homothetic_image(p, x, lambda);
                 },
                 [&](HPolyhedron& h) {
                   for (std::size_t i = 0; i < h.normals.size(); ++i) {
                     const double ax = dot(h.normals[i], x.as_vector());
                     h.offsets[i] = lambda * (h.offsets[i] - ax) + ax;
                   }
                   if (d->verts)
                     for (auto& v : d->verts->vertices) v = homothetic_image(v, x, lambda);
                 },
                 [&](Ball& b) {
                   b.center = homothetic_image(b.center, x, lambda);
                   b.radius *= lambda;
                 },
                 [&](ParamPatch&) { d->transforms.push_back({x, lambda}); },
                 [&](Sublevel&) { d->transforms.push_back({x, lambda}); },
                 [&](Union& u) {
                   for (auto& m : u.members) m = homothety(m, x, lambda);
                 },
             },
             d->v);
  return SetRep(d);
}

// ---------------------------------------------------------------------------

std::vector<Point> sample(const SetRep& a, std::size_t count, std::uint64_t seed) {
  if (count == 0) return {};
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const std::size_t dim = a.dim();

  return std::visit(
      Overloaded{
          [&](const EmptySet&) -> std::vector<Point> { throw SamplingError("cannot sample the empty set"); },
          [&](const PointCloud& c) {
            std::vector<Point> out;
            if (count <= c.points.size()) {
              if (count == c.points.size()) return c.points;
              std::vector<std::size_t> idx(c.points.size());
              std::iota(idx.begin(), idx.end(), 0);
              std::shuffle(idx.begin(), idx.end(), rng);
              idx.resize(count);
              std::sort(idx.begin(), idx.end());
              for (auto i : idx) out.push_back(c.points[i]);
              return out;
            }
            for (std::size_t i = 0; i < count; ++i) out.push_back(c.points[i % c.points.size()]);
            return out;
          },
          [&](const HPolyhedron& h) {
            const VertexList* vl = a.vertices();
            if (!vl || !vl->bounded)
              throw UnboundedSet("polyhedron sampling needs a bounded polyhedron in dimension <= 3");
            if (vl->vertices.empty()) throw SamplingError("cannot sample an infeasible polyhedron");
            const auto& verts = vl->vertices;
            std::vector<Point> out;
            for (std::size_t i = 0; i < verts.size() && out.size() < count; ++i) out.push_back(verts[i]);
            const auto act = active_rows(h, verts);
            std::vector<std::pair<std::size_t, std::size_t>> edges;
            for (std::size_t i = 0; i < verts.size(); ++i)
              for (std::size_t j = i + 1; j < verts.size(); ++j) {
                std::vector<Vector> common;
                for (std::size_t r : act[i])
                  if (std::find(act[j].begin(), act[j].end(), r) != act[j].end()) common.push_back(h.normals[r]);
                if (dim - orthogonal_complement(common, dim).size() + 1 >= dim) edges.emplace_back(i, j);
              }
            std::gamma_distribution<double> gam(1.0, 1.0);
            bool on_edge = true;
            while (out.size() < count) {
              if (on_edge && !edges.empty()) {
                const auto& [i, j] = edges[std::uniform_int_distribution<std::size_t>(0, edges.size() - 1)(rng)];
                const double s = unif(rng);
                out.push_back(verts[i] + s * (verts[j] - verts[i]));
              } else {
                std::vector<double> w(verts.size());
                double tot = 0.0;
                for (auto& x : w) tot += (x = gam(rng));
                Vector acc(dim);
                for (std::size_t i = 0; i < verts.size(); ++i) acc += (w[i] / tot) * verts[i].as_vector();
                out.push_back(Point(acc.data()));
              }
              on_edge = !on_edge;
            }
            return out;
          },
          [&](const Ball& b) {
            std::vector<Point> out;
            for (std::size_t i = 0; i < count; ++i) {
              const Vector u = gaussian_direction(rng, dim);
              double r = b.radius;
              if (i % 2 == 1)
                r *= std::pow(unif(rng), 1.0 / static_cast<double>(dim));
              else if (!b.closed)
                r *= 1.0 - 1e-12;
              out.push_back(b.center + r * u);
            }
            return out;
          },
          [&](const ParamPatch& p) {
            const std::size_t k = p.domain.size();
            const auto per_axis = static_cast<std::size_t>(
                std::max(2.0, std::ceil(std::pow(static_cast<double>(count), 1.0 / static_cast<double>(k)))));
            std::vector<Point> out;
            for (std::size_t flat = 0; out.size() < count; ++flat) {
              std::size_t f = flat;
              std::vector<double> t(k);
              for (std::size_t j = 0; j < k; ++j) {
                const std::size_t idx = f % per_axis;
                f /= per_axis;
                t[j] = p.domain[j].first +
                       (p.domain[j].second - p.domain[j].first) * static_cast<double>(idx) / static_cast<double>(per_axis - 1);
              }
              out.push_back(apply_forward(a.transforms(), eval_patch_base(p, t)));
            }
            return out;
          },
          [&](const Sublevel& s) {
            if (!s.box) throw SamplingError("sublevel set sampling needs a box hint");
            std::vector<Point> out;
            const std::size_t cap = 1000 * count + 10000;
            for (std::size_t tries = 0; tries < cap && out.size() < count; ++tries) {
              Point p(dim);
              for (std::size_t i = 0; i < dim; ++i) p[i] = s.box->lo[i] + (s.box->hi[i] - s.box->lo[i]) * unif(rng);
              if (s.field(p) <= s.level) out.push_back(apply_forward(a.transforms(), p));
            }
            if (out.size() < count)
              throw SamplingError("rejection sampling hit its iteration cap; tighten the box hint");
            return out;
          },
          [&](const Union& u) {
            std::vector<SetRep> live;
            for (const auto& m : u.members)
              if (!m.is_empty()) live.push_back(m);
            if (live.empty()) throw SamplingError("cannot sample the empty set");
            std::vector<Point> out;
            for (std::size_t i = 0; i < live.size(); ++i) {
              const std::size_t share = count / live.size() + (i < count % live.size() ? 1 : 0);
              auto part = sample(live[i], share, seed + 7919 * (i + 1));
              out.insert(out.end(), part.begin(), part.end());
            }
            return out;
          },
      },
      a.variant());
}

}  // namespace tangency::sets
