#include "tangency/calculus.hpp"

#include <Eigen/Dense>
#include <fmt/format.h>
#include <fmt/ranges.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

namespace tangency::calculus {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double eval(const ScalarField& f, const Point& p) {
  const double v = f(p);
  if (!std::isfinite(v)) throw EvaluationError(fmt::format("{} is not finite at ({})", f.name(), fmt::join(p.data(), ", ")));
  return v;
}

double eval1(const ScalarField& f, double t) { return eval(f, Point{t}); }

void require_dim(const ScalarField& f, std::size_t dim) {
  if (static_cast<std::size_t>(f.dim()) != dim) throw DimensionMismatch(dim, static_cast<std::size_t>(f.dim()));
}

double factorial(int n) {
  double r = 1.0;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

// Orthonormal basis of the tangent space of the sphere at u.
std::vector<Vector> tangent_basis(const Vector& u) { return orthogonal_complement(std::span<const Vector>(&u, 1), u.dim()); }

}  // namespace

Vector estimate_gradient(const ScalarField& f, const Point& x) {
  require_dim(f, x.dim());
  if (auto g = f.analytic_gradient(x)) return *g;
  Vector g(x.dim());
  for (std::size_t i = 0; i < x.dim(); ++i) {
    auto central = [&](double h) {
      Point p = x, m = x;
      p[i] += h;
      m[i] -= h;
      return (eval(f, p) - eval(f, m)) / (p[i] - m[i]);
    };
    const double h0 = std::cbrt(kEps) * (1.0 + std::abs(x[i]));
    g[i] = (4.0 * central(0.5 * h0) - central(h0)) / 3.0;
  }
  return g;
}

std::vector<double> default_radii() {
  std::vector<double> r;
  for (int k = 1; k <= 8; ++k) r.push_back(std::pow(10.0, -k));
  return r;
}

DiffReport check_frechet(const ScalarField& f, const Vector& df, const Point& x, const std::vector<double>& radii,
                         double tol, std::size_t directions) {
  require_dim(f, x.dim());
  detail::require_same(df.dim(), x.dim());
  if (radii.size() < 6) throw std::invalid_argument("check_frechet needs at least 6 radii");
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (!(radii[i] > 0.0) || !std::isfinite(radii[i])) throw std::invalid_argument("radii must be positive");
    if (i > 0 && !(radii[i] < radii[i - 1])) throw std::invalid_argument("radii must be strictly decreasing");
  }
  if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
  if (directions < 64) throw std::invalid_argument("check_frechet needs at least 64 directions");

  const std::size_t n = x.dim();
  std::vector<Vector> dirs = sphere_directions(n, directions);
  for (std::size_t i = 0; i < n; ++i) {
    dirs.push_back(Vector::basis(n, i));
    dirs.push_back(-Vector::basis(n, i));
  }
  const double fx = eval(f, x);

  DiffReport rep;
  rep.df = df;
  rep.tol = tol;
  for (double r : radii) {
    double fmax = 0.0;
    auto residual = [&](const Vector& u) {
      const double fy = eval(f, x + r * u);
      fmax = std::max(fmax, std::abs(fy));
      return std::abs(fy - fx - r * dot(df, u)) / r;
    };
    std::vector<std::pair<double, std::size_t>> ranked;
    for (std::size_t i = 0; i < dirs.size(); ++i) ranked.emplace_back(residual(dirs[i]), i);
    std::sort(ranked.begin(), ranked.end(), std::greater<>());
    ResidualPoint pt{r, ranked.front().first, 0.0, dirs[ranked.front().second]};
    // Pattern search on the sphere from the three best grid directions.
    if (n > 1) {
      const double step0 = n == 2 ? std::numbers::pi / static_cast<double>(directions) : 0.2;
      for (std::size_t s = 0; s < std::min<std::size_t>(3, ranked.size()); ++s) {
        Vector u = dirs[ranked[s].second];
        double best = ranked[s].first;
        for (double step = step0; step > 1e-12;) {
          bool moved = false;
          for (const Vector& t : tangent_basis(u)) {
            for (double sign : {1.0, -1.0}) {
              const Vector cand = (u + sign * step * t).normalized();
              const double v = residual(cand);
              if (v > best) {
                best = v;
                u = cand;
                moved = true;
              }
            }
          }
          if (!moved) step *= 0.5;
        }
        if (best > pt.residual) {
          pt.residual = best;
          pt.direction = u;
        }
      }
    }
    pt.noise = 8.0 * kEps * (1.0 + std::abs(fx) + fmax + r * df.norm()) / r;
    rep.curve.push_back(std::move(pt));
  }

  for (std::size_t k = 1; k < rep.curve.size(); ++k) {
    const auto& prev = rep.curve[k - 1];
    const auto& cur = rep.curve[k];
    if (cur.residual > prev.residual * (1.0 + 1e-3) + prev.noise + cur.noise) {
      rep.verdict = Verdict::Fail;
      rep.witness = cur;
      rep.message = fmt::format("residual increases from {:.3g} to {:.3g} at radius {:.3g}", prev.residual,
                                cur.residual, cur.radius);
      return rep;
    }
  }
  const auto& last = rep.curve.back();
  if (last.residual > tol + last.noise) {
    rep.verdict = Verdict::Fail;
    rep.witness = last;
    rep.message = fmt::format("residual {:.3g} at radius {:.3g} exceeds {:.3g}", last.residual, last.radius, tol);
    return rep;
  }
  rep.verdict = Verdict::Pass;
  rep.message = fmt::format("residual {:.3g} at radius {:.3g}", last.residual, last.radius);
  return rep;
}

Directional directional_differential(const ScalarField& f, const Point& x, const Vector& v) {
  require_dim(f, x.dim());
  detail::require_same(v.dim(), x.dim());
  const double fx = eval(f, x);
  Directional out;
  auto one_side = [&](double sign, std::vector<double>& quot, std::vector<double>& noise) {
    for (int k = 4; k <= 24; ++k) {
      const double q = sign * std::ldexp(1.0, -k);
      const double fq = eval(f, x + q * v);
      quot.push_back((fq - fx) / q);
      noise.push_back(4.0 * kEps * (std::abs(fx) + std::abs(fq)) / std::abs(q));
      out.trace.emplace_back(q, quot.back());
    }
  };
  std::vector<double> fwd, fnoise, bwd, bnoise;
  one_side(1.0, fwd, fnoise);
  one_side(-1.0, bwd, bnoise);

  auto limit = [&](const std::vector<double>& quot, const std::vector<double>& noise, const char* side) {
    const auto tail = quot.end() - 5;
    const auto [lo, hi] = std::minmax_element(tail, quot.end());
    if (*hi - *lo > 1e-4 * (1.0 + std::abs(quot.back())) + 2.0 * noise.back())
      throw NonConvergent(fmt::format("{} difference quotients of {} do not converge (spread {:.3g} on the last five "
                                      "scales)",
                                      side, f.name(), *hi - *lo),
                          out.trace);
    return 2.0 * quot.back() - quot[quot.size() - 2];
  };
  out.forward = limit(fwd, fnoise, "forward");
  out.backward = limit(bwd, bnoise, "backward");
  const double allowance =
      1e-4 * (1.0 + std::max(std::abs(out.forward), std::abs(out.backward))) + 6.0 * (fnoise.back() + bnoise.back());
  out.two_sided = std::abs(out.forward - out.backward) <= allowance;
  out.value = out.two_sided ? 0.5 * (out.forward + out.backward) : std::numeric_limits<double>::quiet_NaN();
  return out;
}

Vector directional_differential(const std::vector<ScalarField>& f, const Point& x, const Vector& v) {
  Vector out(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    const Directional d = directional_differential(f[i], x, v);
    if (!d.two_sided)
      throw NonConvergent(fmt::format("component {} has one-sided values {:.6g} and {:.6g}", i, d.forward, d.backward),
                          d.trace);
    out[i] = d.value;
  }
  return out;
}

ChainRuleRow chain_rule_row(const Vector& v) {
  detail::require_same(v.dim(), 2);
  static const ScalarField f = ScalarField::builtin("acker_dickstein");
  static const ScalarField fg = ScalarField::builtin("acker_dickstein_composite");
  static const std::vector<ScalarField> g = {ScalarField::from_expression("x1", 2),
                                             ScalarField::from_expression("x2^2", 2)};
  const Point origin{0.0, 0.0};
  ChainRuleRow row;
  row.direction = v;
  row.composite = directional_differential(fg, origin, v).value;
  const Vector dg = directional_differential(g, origin, v);
  Point g0{eval(g[0], origin), eval(g[1], origin)};
  row.chain_rule = directional_differential(f, g0, dg).value;
  row.discrepancy = std::abs(row.composite - row.chain_rule);
  return row;
}

Report chain_rule_counterexample() {
  Report rep;
  rep.title = "chain rule for Grassmann differentials";
  const ChainRuleRow diag = chain_rule_row(Vector{1.0, 1.0});
  rep.set_value("composite", diag.composite);
  rep.set_value("chain_rule", diag.chain_rule);
  rep.set_value("discrepancy", diag.discrepancy);
  rep.tolerances.emplace_back("discrepancy_threshold", 0.4);
  rep.tolerances.emplace_back("axis_tol", 1e-6);
  rep.add_check("discrepancy along (1,1) exceeds 0.4", diag.discrepancy > 0.4 ? Verdict::Pass : Verdict::Fail,
                fmt::format("d(f o g)(0)(v) = {:.6g}, df(g(0))(dg(0)(v)) = {:.6g}", diag.composite, diag.chain_rule));
  rep.witness_directions.push_back(diag.direction);
  for (const Vector& axis : {Vector{1.0, 0.0}, Vector{0.0, 1.0}}) {
    const ChainRuleRow row = chain_rule_row(axis);
    rep.add_check(fmt::format("no discrepancy along ({:g},{:g})", axis[0], axis[1]),
                  row.discrepancy <= 1e-6 ? Verdict::Pass : Verdict::Fail,
                  fmt::format("composite {:.3g}, chain rule {:.3g}", row.composite, row.chain_rule));
  }
  rep.settle();
  rep.message = fmt::format("discrepancy {:.6g} along (1,1)", diag.discrepancy);
  return rep;
}

PeanoResult peano_derivative(const ScalarField& f, double x, int n) {
  require_dim(f, 1);
  if (n < 0 || n > 6) throw std::invalid_argument("Peano derivative order must be in 0..6");
  const double fx = eval1(f, x);

  struct Sample {
    double h, g;
  };
  std::vector<std::pair<Sample, Sample>> grid;  // (+h, -h) per scale
  double fmax = std::abs(fx);
  for (int k = 16; k <= 80; ++k) {
    const double h = std::exp2(-0.25 * k);
    const double fp = eval1(f, x + h), fm = eval1(f, x - h);
    fmax = std::max({fmax, std::abs(fp), std::abs(fm)});
    grid.push_back({{h, fp - fx}, {-h, fm - fx}});
  }
  // Keep scales whose h^n stays well above the rounding floor of f.
  const double floor = 1e4 * kEps * std::max(fmax, std::numeric_limits<double>::min());
  std::size_t kept = 0;
  while (kept < grid.size() && std::pow(grid[kept].first.h, n) >= floor) ++kept;

  double last_residual = std::numeric_limits<double>::infinity();
  double last_scale = 0.0;
  for (std::size_t start = 0; start < kept; ++start) {
    const std::size_t points = 2 * (kept - start);
    const int d = std::min<int>(n + 4, static_cast<int>(points) - 4);
    if (d < std::max(n, 1)) break;
    const double big = grid[start].first.h;
    Eigen::MatrixXd a(static_cast<Eigen::Index>(points), d);
    Eigen::VectorXd b(static_cast<Eigen::Index>(points));
    Eigen::Index row = 0;
    for (std::size_t i = start; i < kept; ++i) {
      for (const Sample& s : {grid[i].first, grid[i].second}) {
        const double t = s.h / big;
        const double w = std::pow(std::abs(t), -n);
        for (int j = 1; j <= d; ++j) a(row, j - 1) = std::pow(t, j) * w;
        b(row) = s.g * w;
        ++row;
      }
    }
    const Eigen::VectorXd scale = a.colwise().norm().transpose().cwiseMax(std::numeric_limits<double>::min());
    const Eigen::MatrixXd scaled = a * scale.cwiseInverse().asDiagonal();
    const Eigen::VectorXd c = scaled.colPivHouseholderQr().solve(b).cwiseQuotient(scale);

    std::vector<double> coeffs{fx};
    for (int j = 1; j <= d; ++j) coeffs.push_back(c(j - 1) / std::pow(big, j));
    // Terms above order n vanish as h -> 0; what the fit leaves unexplained must too.
    double residual = 0.0;
    const double hmin = grid[kept - 1].first.h;
    for (const Sample& s : {grid[kept - 1].first, grid[kept - 1].second}) {
      double p = 0.0;
      for (int j = d; j >= 1; --j) p = (p + coeffs[static_cast<std::size_t>(j)]) * s.h;
      residual = std::max(residual, std::abs(s.g - p) / std::pow(hmin, n));
    }
    coeffs.resize(static_cast<std::size_t>(n) + 1);
    last_residual = residual;
    last_scale = hmin;
    if (residual <= 1e-3) {
      PeanoResult out;
      out.value = factorial(n) * coeffs.back();
      out.coeffs = std::move(coeffs);
      out.residual = residual;
      out.smallest_scale = hmin;
      return out;
    }
  }
  throw NoPeanoDerivative(fmt::format(
      "no Peano derivative of order {} detected at tolerance (normalized residual {:.3g} at h = {:.3g})", n,
      last_residual, last_scale));
}

Report strict_derivative_check(const ScalarField& f, double x, double tol, std::uint64_t seed) {
  require_dim(f, 1);
  if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
  Report rep;
  rep.title = "strict derivative";
  rep.tolerances.emplace_back("tol", tol);
  const double dfx = estimate_gradient(f, Point{x})[0];
  rep.set_value("derivative", dfx);

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  struct Worst {
    double dev = -1.0, a = 0.0, b = 0.0;
  };
  std::vector<Worst> windows;
  std::vector<int> exps;
  for (int m = 4; m <= 24; m += 2) {
    const double delta = std::ldexp(1.0, -m);
    Worst w;
    auto probe = [&](double a, double b) {
      const double fa = eval1(f, a), fb = eval1(f, b);
      const double gap = b - a;
      if (gap == 0.0) return;
      if (8.0 * kEps * (std::abs(fa) + std::abs(fb)) / std::abs(gap) > 0.1 * tol) return;
      const double dev = std::abs((fb - fa) / gap - dfx);
      if (dev > w.dev) w = {dev, a, b};
    };
    probe(x - delta, x + delta);
    probe(x, x + delta);
    probe(x - delta, x);
    const double gaps[] = {delta, delta / 16, delta / 256, delta * delta / 4, delta * delta / 64};
    for (int i = 0; i < 64; ++i) {
      const double a = x + delta * unit(rng);
      for (double s : gaps) {
        const double b = a + s <= x + delta ? a + s : a - s;
        probe(a, b);
      }
    }
    windows.push_back(w);
    exps.push_back(m);
    if (w.dev >= 0.0) rep.set_value(fmt::format("deviation@2^-{}", m), w.dev);
  }

  Worst tail;
  bool informative = false;
  for (std::size_t i = windows.size() - 3; i < windows.size(); ++i) {
    if (windows[i].dev < 0.0) continue;
    informative = true;
    if (windows[i].dev > tail.dev) tail = windows[i];
  }
  if (!informative) {
    rep.add_check("quotients converge to f'(x)", Verdict::Inconclusive,
                  "every pair in the smallest windows is below the rounding floor");
    rep.settle();
    rep.message = "no usable pairs in the smallest windows";
    return rep;
  }
  rep.set_value("deviation", tail.dev);
  rep.witness_points = {Point{tail.a}, Point{tail.b}};
  const bool ok = tail.dev <= tol;
  rep.add_check("quotients converge to f'(x)", ok ? Verdict::Pass : Verdict::Fail,
                fmt::format("max |(f(b)-f(a))/(b-a) - f'(x)| = {:.3g} at a = {:.17g}, b = {:.17g}", tail.dev, tail.a,
                            tail.b));
  rep.settle();
  rep.message = ok ? fmt::format("strictly differentiable, f'(x) = {:.6g}", dfx)
                   : fmt::format("quotient deviates by {:.3g} from f'(x) = {:.6g}", tail.dev, dfx);
  return rep;
}

Report check_linear(const Map& m, std::size_t dim, double tol, std::size_t samples, std::uint64_t seed) {
  if (dim == 0) throw std::invalid_argument("dimension must be positive");
  if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
  Report rep;
  rep.title = "linearity";
  rep.tolerances.emplace_back("tol", tol);

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> expo(-2.0, 2.0), tdist(-10.0, 10.0);
  std::optional<std::size_t> out_dim;
  auto apply = [&](const Vector& v) {
    Vector y = m(v);
    if (!out_dim) out_dim = y.dim();
    detail::require_same(y.dim(), *out_dim);
    return y;
  };
  auto random_vector = [&] {
    Vector v(dim);
    for (std::size_t i = 0; i < dim; ++i) v[i] = gauss(rng);
    return v * std::pow(10.0, expo(rng));
  };

  double add_err = 0.0, hom_err = 0.0, norm = 0.0;
  Vector add_x, add_y, hom_x;
  double hom_t = 0.0;
  for (std::size_t i = 0; i < samples; ++i) {
    const Vector xv = random_vector(), yv = random_vector();
    const Vector mx = apply(xv), my = apply(yv);
    const double ea = (apply(xv + yv) - mx - my).norm() / (1.0 + mx.norm() + my.norm());
    if (ea > add_err) {
      add_err = ea;
      add_x = xv;
      add_y = yv;
    }
    const double t = tdist(rng);
    const double eh = (apply(t * xv) - t * mx).norm() / (1.0 + std::abs(t) * mx.norm());
    if (eh > hom_err) {
      hom_err = eh;
      hom_x = xv;
      hom_t = t;
    }
    norm = std::max(norm, mx.norm() / xv.norm());
  }
  for (const Vector& u : sphere_directions(dim, dim <= 3 ? 2000 : 512)) norm = std::max(norm, apply(u).norm());

  rep.set_value("additivity_error", add_err);
  rep.set_value("homogeneity_error", hom_err);
  rep.set_value("norm", norm);
  rep.add_check("additive", add_err <= tol ? Verdict::Pass : Verdict::Fail,
                add_err <= tol ? std::string{} : fmt::format("relative error {:.3g}", add_err));
  if (add_err > tol) {
    rep.witness_directions.push_back(add_x);
    rep.witness_directions.push_back(add_y);
  }
  rep.add_check("homogeneous", hom_err <= tol ? Verdict::Pass : Verdict::Fail,
                hom_err <= tol ? std::string{} : fmt::format("relative error {:.3g} at t = {:.6g}", hom_err, hom_t));
  if (hom_err > tol) rep.witness_directions.push_back(hom_x);
  rep.add_check("bounded", std::isfinite(norm) ? Verdict::Pass : Verdict::Fail,
                fmt::format("operator norm estimate {:.6g}", norm));
  rep.settle();
  rep.message = rep.verdict == Verdict::Pass ? fmt::format("linear, norm {:.6g}", norm) : "not linear";
  return rep;
}

Report mean_value_certificate(const Curve& f, double t, double h, int n, std::size_t samples) {
  if (n < 0 || n > 3) throw std::invalid_argument("order must be in 0..3");
  if (!(h != 0.0) || !std::isfinite(h) || !std::isfinite(t)) throw std::invalid_argument("h must be finite and nonzero");
  if (samples < 2) throw std::invalid_argument("need at least 2 samples");
  Report rep;
  rep.title = "mean value certificate";

  const double hn1 = std::pow(h, n + 1);
  Vector rem = f(t + h);
  double mag = rem.norm();
  double hj = 1.0;
  for (int j = 0; j <= n; ++j) {
    const Vector term = f.derivative(t, j) * (hj / factorial(j));
    rem -= term;
    mag += term.norm();
    hj *= h;
  }
  const Vector k = rem * (factorial(n + 1) / hn1);
  if (!k.finite()) throw EvaluationError("mean value quotient is not finite");

  const double gap = std::abs(h) / static_cast<double>(samples - 1);
  std::vector<Vector> pts;
  pts.reserve(samples);
  for (std::size_t i = 0; i < samples; ++i) pts.push_back(f.derivative(t + h * static_cast<double>(i) / (samples - 1), n + 1));
  double lip = 0.0;
  if (n + 2 <= 4) {
    for (std::size_t i = 0; i < samples; ++i)
      lip = std::max(lip, f.derivative(t + h * static_cast<double>(i) / (samples - 1), n + 2).norm());
  } else {
    for (std::size_t i = 1; i < samples; ++i) lip = std::max(lip, (pts[i] - pts[i - 1]).norm() / gap);
  }
  const double tol = 0.5 * lip * gap + 16.0 * kEps * factorial(n + 1) * mag / std::abs(hn1) + 1e-12 * (1.0 + k.norm());
  const HullCertificate cert = in_convex_hull(k, pts, tol);

  for (std::size_t i = 0; i < k.dim(); ++i) rep.set_value(fmt::format("k[{}]", i), k[i]);
  rep.set_value("residual", cert.residual);
  rep.tolerances.emplace_back("hull_tol", tol);
  rep.witness_points.push_back(Point(k.data()));
  std::size_t heaviest = 0;
  for (std::size_t i = 1; i < cert.weights.size(); ++i)
    if (cert.weights[i] > cert.weights[heaviest]) heaviest = i;
  if (!cert.weights.empty()) rep.set_value("s_heaviest", t + h * static_cast<double>(heaviest) / (samples - 1));
  rep.add_check("k lies in the hull of sampled f^(n+1)", cert.inside ? Verdict::Pass : Verdict::Fail,
                fmt::format("residual {:.3g}, tolerance {:.3g}", cert.residual, tol));
  rep.settle();
  rep.message = cert.inside ? fmt::format("certified, residual {:.3g}", cert.residual)
                            : fmt::format("hull residual {:.3g} exceeds {:.3g}; sampling too coarse or f not smooth",
                                          cert.residual, tol);
  return rep;
}

}  // namespace tangency::calculus
