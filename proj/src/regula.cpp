#include "tangency/regula.hpp"

#include <Eigen/Dense>
#include <fmt/format.h>
#include <fmt/ranges.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "tangency/calculus.hpp"

namespace tangency::regula {

const char* to_string(Mode m) { return m == Mode::Max ? "max" : "min"; }

Mode parse_mode(const std::string& s) {
  if (s == "max") return Mode::Max;
  if (s == "min") return Mode::Min;
  throw std::invalid_argument("mode must be 'max' or 'min', got '" + s + "'");
}

const char* label(Verdict v) {
  switch (v) {
    case Verdict::Pass:
      return "SATISFIED";
    case Verdict::Fail:
      return "VIOLATED";
    default:
      return "INCONCLUSIVE";
  }
}

namespace {

std::string coords(std::span<const double> c) { return fmt::format("({:.6g})", fmt::join(c, ", ")); }

}  // namespace

RegulaCertificate check_regula(const ScalarField& f, const sets::SetRep& a, const Point& x, Mode mode,
                               const cones::BlowUpParams& p, std::optional<double> tol) {
  detail::require_same(static_cast<std::size_t>(f.dim()), x.dim());
  detail::require_same(a.dim(), x.dim());
  p.validate();
  if (tol && !(*tol >= 0.0)) throw std::invalid_argument("slack tolerance must be nonnegative");

  const sets::Distance d = sets::distance_to_set(x, a);
  if (d.value - d.bound > p.distance_tol)
    throw FarFromSet(fmt::format("x = {} is at distance {:.3g} from A", coords(x.coords()), d.value));

  RegulaCertificate cert;
  cert.mode = mode;
  cert.point = x;
  if (auto g = f.analytic_gradient(x)) {
    cert.gradient = *g;
    cert.analytic_gradient = true;
  } else {
    cert.gradient = calculus::estimate_gradient(f, x);
  }
  const calculus::DiffReport fr = calculus::check_frechet(f, cert.gradient, x);
  cert.frechet = fr.verdict;
  cert.frechet_message = fr.message;
  cert.slack = tol.value_or(1e-6 * (1.0 + cert.gradient.norm()));

  cert.cone = cones::upper_tangent_cone(a, x, p);
  if (cert.cone.kind == cones::ConeKind::Empty)
    throw std::logic_error("internal inconsistency: empty tangent cone at a closure point");

  // Generators decide the sign; for convex pieces the projection of the
  // signed gradient gives the largest value over unit cone directions.
  const double sign = mode == Mode::Max ? 1.0 : -1.0;
  const Vector sg = sign * cert.gradient;
  double worst = -std::numeric_limits<double>::infinity();
  cert.worst_direction = Vector(x.dim());
  for (const Vector& g : cert.cone.gens) {
    if (dot(sg, g) > worst) {
      worst = dot(sg, g);
      cert.worst_direction = g;
    }
  }
  if (cert.cone.exact()) {
    for (const cones::PolyCone& piece : cert.cone.pieces) {
      const std::vector<double> zeros(piece.normals.size(), 0.0);
      const Vector proj = project_onto_polyhedron(Point(sg.data()), piece.normals, zeros).point.as_vector();
      const double len = proj.norm();
      if (len > 1e-12 * (1.0 + sg.norm()) && len > worst) {
        worst = len;
        cert.worst_direction = proj / len;
      }
    }
  }
  if (cert.cone.gens.empty() && !cert.cone.full_space) {
    worst = 0.0;
    cert.note = "tangent cone is the apex alone";
  }
  // The apex itself belongs to the cone, so the supremum over {v in cone, |v| <= 1} is >= 0.
  cert.worst_value = sign * std::max(worst, 0.0);

  if (cert.cone.inconclusive) {
    cert.verdict = Verdict::Inconclusive;
    cert.note = "tangent cone is inconclusive: " + cert.cone.note;
  } else if (fr.verdict != Verdict::Pass) {
    cert.verdict = Verdict::Inconclusive;
    cert.note = "f is not verified differentiable at x: " + fr.message;
  } else {
    cert.verdict = worst > cert.slack ? Verdict::Fail : Verdict::Pass;
  }
  return cert;
}

Report RegulaCertificate::to_report() const {
  Report rep;
  rep.title = fmt::format("regula ({})", to_string(mode));
  rep.slack = slack;
  rep.set_value("worst_value", worst_value);
  rep.set_value("gradient_norm", gradient.norm());
  rep.set_value("generators", static_cast<double>(cone.gens.size()));
  if (cone.kind == cones::ConeKind::Sampled) rep.set_value("angular_resolution", cone.angular_res);
  rep.tolerances.emplace_back("slack", slack);
  rep.witness_points.push_back(point);
  rep.witness_directions.push_back(worst_direction);

  rep.add_check("f differentiable at x", frechet == Verdict::Pass ? Verdict::Pass : Verdict::Inconclusive,
                frechet_message);
  rep.add_check(fmt::format("tangent cone ({})", cones::to_string(cone.kind)),
                cone.inconclusive ? Verdict::Inconclusive : Verdict::Pass, cone.note);
  const double signed_worst = mode == Mode::Max ? worst_value : -worst_value;
  rep.add_check(mode == Mode::Max ? "<Df(x), v> <= 0 on the cone" : "<Df(x), v> >= 0 on the cone",
                signed_worst > slack ? Verdict::Fail : Verdict::Pass,
                fmt::format("worst value {:.6g} along {}", worst_value, coords(worst_direction.comps())));
  rep.verdict = verdict;
  rep.message = fmt::format("{}: worst value {:.6g}{}", label(verdict), worst_value, note.empty() ? "" : "; " + note);
  return rep;
}

Report directional_variation(const ScalarField& f, const Point& xbar, const std::vector<Point>& seq, double tol,
                             double direction_tol) {
  detail::require_same(static_cast<std::size_t>(f.dim()), xbar.dim());
  if (seq.size() < 4) throw std::invalid_argument("sequence needs at least 4 points");
  if (!(tol >= 0.0) || !(direction_tol > 0.0)) throw std::invalid_argument("tolerances must be positive");
  std::vector<Vector> dirs;
  for (const Point& xn : seq) {
    detail::require_same(xn.dim(), xbar.dim());
    const Vector s = xn - xbar;
    if (!(s.norm() > 0.0)) throw std::invalid_argument("sequence points must differ from xbar");
    dirs.push_back(s.normalized());
  }
  const std::size_t tail = seq.size() - std::max<std::size_t>(1, seq.size() / 4);
  double spread = 0.0;
  for (std::size_t i = tail; i < dirs.size(); ++i) spread = std::max(spread, (dirs[i] - dirs.back()).norm());
  if (spread > direction_tol)
    throw std::invalid_argument(
        fmt::format("directions (x_n - xbar)/|x_n - xbar| are not Cauchy on the tail (spread {:.3g})", spread));

  const auto analytic = f.analytic_gradient(xbar);
  const Vector grad = analytic ? *analytic : calculus::estimate_gradient(f, xbar);
  if (!(grad.norm() > tol)) throw std::invalid_argument("Df(xbar) vanishes; the variation test needs Df(xbar) != 0");

  Report rep;
  rep.title = "directional variation";
  rep.tolerances.emplace_back("tol", tol);
  rep.tolerances.emplace_back("direction_tol", direction_tol);
  const Vector& pdir = dirs.back();
  const double s = dot(grad, pdir);
  rep.set_value("s", s);
  rep.set_value("direction_spread", spread);
  rep.witness_directions.push_back(pdir);
  if (std::abs(s) <= tol) {
    rep.add_check("<Df(xbar), p> is nonzero", Verdict::Inconclusive, fmt::format("s = {:.3g}", s));
    rep.settle();
    rep.message = "<Df(xbar), p> vanishes; no sign prediction";
    return rep;
  }
  const double fbar = f(xbar);
  std::size_t agree = 0;
  std::optional<Point> bad;
  for (std::size_t i = tail; i < seq.size(); ++i) {
    const double diff = f(seq[i]) - fbar;
    if ((s > 0 && diff > 0) || (s < 0 && diff < 0))
      ++agree;
    else if (!bad)
      bad = seq[i];
  }
  const std::size_t total = seq.size() - tail;
  rep.set_value("agreeing", static_cast<double>(agree));
  rep.set_value("tail", static_cast<double>(total));
  if (bad) rep.witness_points.push_back(*bad);
  rep.add_check(s > 0 ? "f(x_n) > f(xbar) on the tail" : "f(x_n) < f(xbar) on the tail",
                agree == total ? Verdict::Pass : Verdict::Fail, fmt::format("{} of {} tail points agree", agree, total));
  rep.settle();
  rep.message = fmt::format("s = {:.6g}, {} of {} tail points agree", s, agree, total);
  return rep;
}

BruteForce brute_force_optimum(const ScalarField& f, const sets::SetRep& polytope, Mode mode, int grid) {
  const auto* h = std::get_if<sets::HPolyhedron>(&polytope.variant());
  const std::size_t dim = polytope.dim();
  if (!h || !polytope.transforms().empty()) throw std::invalid_argument("brute force needs an untransformed polyhedron");
  if (dim != 2 && dim != 3) throw std::invalid_argument("brute force supports dimension 2 and 3");
  const VertexList* vl = polytope.vertices();
  if (!vl || !vl->bounded || vl->vertices.empty()) throw std::invalid_argument("brute force needs a bounded polytope");
  if (grid < 2) throw std::invalid_argument("grid must be at least 2");
  detail::require_same(static_cast<std::size_t>(f.dim()), dim);

  const double sign = mode == Mode::Max ? 1.0 : -1.0;
  BruteForce out;
  double best = -std::numeric_limits<double>::infinity();
  auto consider = [&](const Point& z) {
    const double v = sign * f(z);
    ++out.evaluated;
    if (v > best) {
      best = v;
      out.best = z;
    }
  };
  auto inside = [&](const Point& z) {
    for (std::size_t i = 0; i < h->normals.size(); ++i)
      if (dot(h->normals[i], z.as_vector()) > h->offsets[i] + 1e-12 * (1.0 + std::abs(h->offsets[i]))) return false;
    return true;
  };
  const auto& verts = vl->vertices;
  std::vector<std::vector<std::size_t>> active(verts.size());
  for (std::size_t v = 0; v < verts.size(); ++v) {
    consider(verts[v]);
    for (std::size_t i = 0; i < h->normals.size(); ++i)
      if (std::abs(dot(h->normals[i], verts[v].as_vector()) - h->offsets[i]) <= 1e-9 * (1.0 + std::abs(h->offsets[i])))
        active[v].push_back(i);
  }

  // Edges: vertex pairs whose common active rows have rank dim - 1.
  for (std::size_t u = 0; u < verts.size(); ++u) {
    for (std::size_t w = u + 1; w < verts.size(); ++w) {
      std::vector<std::size_t> common;
      std::set_intersection(active[u].begin(), active[u].end(), active[w].begin(), active[w].end(),
                            std::back_inserter(common));
      if (common.size() < dim - 1) continue;
      Eigen::MatrixXd m(static_cast<Eigen::Index>(common.size()), static_cast<Eigen::Index>(dim));
      for (std::size_t r = 0; r < common.size(); ++r)
        for (std::size_t c = 0; c < dim; ++c)
          m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = h->normals[common[r]][c];
      Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
      lu.setThreshold(1e-9);
      if (lu.rank() != static_cast<Eigen::Index>(dim) - 1) continue;
      for (int k = 1; k < grid - 1; ++k) {
        const double t = static_cast<double>(k) / (grid - 1);
        consider(verts[u] + t * (verts[w] - verts[u]));
      }
    }
  }

  auto plane_grid = [&](const Point& origin, const Vector& e1, const Vector& e2, const std::vector<Point>& pts, int n) {
    double lo1 = std::numeric_limits<double>::infinity(), hi1 = -lo1, lo2 = lo1, hi2 = -lo1;
    for (const Point& q : pts) {
      const double s = dot(q - origin, e1), t = dot(q - origin, e2);
      lo1 = std::min(lo1, s);
      hi1 = std::max(hi1, s);
      lo2 = std::min(lo2, t);
      hi2 = std::max(hi2, t);
    }
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const Point z = origin + (lo1 + (hi1 - lo1) * i / (n - 1)) * e1 + (lo2 + (hi2 - lo2) * j / (n - 1)) * e2;
        if (inside(z)) consider(z);
      }
  };

  if (dim == 2) {
    plane_grid(Point{0.0, 0.0}, Vector{1.0, 0.0}, Vector{0.0, 1.0}, verts, grid);
  } else {
    for (std::size_t i = 0; i < h->normals.size(); ++i) {
      std::vector<Point> face;
      for (std::size_t v = 0; v < verts.size(); ++v)
        if (std::find(active[v].begin(), active[v].end(), i) != active[v].end()) face.push_back(verts[v]);
      if (face.size() < 3) continue;
      const auto basis = orthogonal_complement(std::span<const Vector>(&h->normals[i], 1), 3);
      plane_grid(face.front(), basis[0], basis[1], face, grid);
    }
    const int n = std::max(2, grid / 5);
    Vector lo(3), hi(3);
    for (std::size_t c = 0; c < 3; ++c) {
      lo[c] = std::numeric_limits<double>::infinity();
      hi[c] = -lo[c];
      for (const Point& q : verts) {
        lo[c] = std::min(lo[c], q[c]);
        hi[c] = std::max(hi[c], q[c]);
      }
    }
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          const Point z{lo[0] + (hi[0] - lo[0]) * i / (n - 1), lo[1] + (hi[1] - lo[1]) * j / (n - 1),
                        lo[2] + (hi[2] - lo[2]) * k / (n - 1)};
          if (inside(z)) consider(z);
        }
  }
  out.value = sign * best;
  return out;
}

Report certify_against_bruteforce(const ScalarField& f, const sets::SetRep& a, Mode mode, const cones::BlowUpParams& p,
                                  int grid, std::uint64_t seed) {
  const BruteForce bf = brute_force_optimum(f, a, mode, grid);
  const RegulaCertificate cert = check_regula(f, a, bf.best, mode, p);

  Report rep;
  rep.title = fmt::format("regula against brute force ({})", to_string(mode));
  rep.slack = cert.slack;
  rep.set_value("best_value", bf.value);
  rep.set_value("evaluated", static_cast<double>(bf.evaluated));
  rep.set_value("worst_value", cert.worst_value);
  rep.tolerances.emplace_back("slack", cert.slack);
  rep.tolerances.emplace_back("grid", grid);
  rep.witness_points.push_back(bf.best);
  rep.witness_directions.push_back(cert.worst_direction);
  rep.add_check("regula holds at the brute-force optimum", cert.verdict,
                fmt::format("x* = {}, {}", coords(bf.best.coords()), label(cert.verdict)));

  // Non-optimal points: refutation is possible but not guaranteed.
  const double sign = mode == Mode::Max ? 1.0 : -1.0;
  std::vector<Point> probes = sets::sample(a, 16, seed);
  for (const Point& v : a.vertices()->vertices) probes.push_back(v);
  std::size_t refuted = 0, satisfied = 0, inconclusive = 0;
  for (const Point& z : probes) {
    if (sign * f(z) >= sign * bf.value - 1e-9 * (1.0 + std::abs(bf.value))) continue;
    const Verdict v = check_regula(f, a, z, mode, p).verdict;
    (v == Verdict::Fail ? refuted : v == Verdict::Pass ? satisfied : inconclusive)++;
  }
  rep.set_value("refuted", static_cast<double>(refuted));
  rep.set_value("satisfied_non_optimum", static_cast<double>(satisfied));
  rep.set_value("inconclusive_non_optimum", static_cast<double>(inconclusive));
  rep.settle();
  rep.message = fmt::format("{} at x*; non-optima: {} refuted, {} satisfy the condition, {} inconclusive",
                            label(cert.verdict), refuted, satisfied, inconclusive);
  return rep;
}

}  // namespace tangency::regula
