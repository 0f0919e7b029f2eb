#include "tangency/geometry.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

namespace tangency {

namespace {
constexpr double kEps = std::numeric_limits<double>::epsilon();
}

double Vector::norm() const { return std::sqrt(norm_squared()); }

double Vector::norm_squared() const {
  double s = 0.0;
  for (double c : c_) s += c * c;
  return s;
}

Vector Vector::normalized() const {
  const double n = norm();
  if (!(n > 0.0)) throw std::invalid_argument("cannot normalize the zero vector");
  return *this / n;
}

bool Vector::finite() const {
  return std::all_of(c_.begin(), c_.end(), [](double c) { return std::isfinite(c); });
}

Vector& Vector::operator+=(const Vector& o) {
  detail::require_same(dim(), o.dim());
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
  return *this;
}

Vector& Vector::operator-=(const Vector& o) {
  detail::require_same(dim(), o.dim());
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
  return *this;
}

Vector& Vector::operator*=(double s) {
  for (double& c : c_) c *= s;
  return *this;
}

bool Point::finite() const {
  return std::all_of(c_.begin(), c_.end(), [](double c) { return std::isfinite(c); });
}

Vector operator-(const Point& a, const Point& b) {
  detail::require_same(a.dim(), b.dim());
  std::vector<double> d(a.dim());
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = a.c_[i] - b.c_[i];
  return Vector(std::move(d));
}

Point operator+(const Point& p, const Vector& v) {
  detail::require_same(p.dim(), v.dim());
  std::vector<double> d(p.dim());
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = p.c_[i] + v[i];
  return Point(std::move(d));
}

Point operator-(const Point& p, const Vector& v) {
  detail::require_same(p.dim(), v.dim());
  std::vector<double> d(p.dim());
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = p.c_[i] - v[i];
  return Point(std::move(d));
}

double dot(const Vector& u, const Vector& v) {
  detail::require_same(u.dim(), v.dim());
  double s = 0.0;
  for (std::size_t i = 0; i < u.dim(); ++i) s += u[i] * v[i];
  return s;
}

double distance(const Point& a, const Point& b) { return (a - b).norm(); }

double angle_between(const Vector& u, const Vector& v) {
  const double nu = u.norm();
  const double nv = v.norm();
  if (!(nu > 0.0) || !(nv > 0.0)) throw std::invalid_argument("angle with a zero vector");
  // atan2 form stays accurate for nearly parallel vectors.
  double cross2 = 0.0;
  for (std::size_t i = 0; i < u.dim(); ++i)
    for (std::size_t j = i + 1; j < u.dim(); ++j) {
      const double c = u[i] * v[j] - u[j] * v[i];
      cross2 += c * c;
    }
  return std::atan2(std::sqrt(cross2), dot(u, v));
}

Point homothetic_image(const Point& a, const Point& center, double lambda) {
  return center + lambda * (a - center);
}

// ---------------------------------------------------------------------------

namespace {

Eigen::VectorXd to_eigen(std::span<const double> v) {
  Eigen::VectorXd e(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) e[static_cast<Eigen::Index>(i)] = v[i];
  return e;
}

// Affine minimum-norm combination of the columns of Q: min |Q a| s.t. sum a = 1.
Eigen::VectorXd affine_min_norm(const Eigen::MatrixXd& q) {
  const Eigen::Index k = q.cols();
  Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(k + 1, k + 1);
  kkt.topLeftCorner(k, k) = q.transpose() * q;
  kkt.block(0, k, k, 1).setOnes();
  kkt.block(k, 0, 1, k).setOnes();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(k + 1);
  rhs[k] = 1.0;
  Eigen::VectorXd sol = kkt.fullPivLu().solve(rhs);
  return sol.head(k);
}

void check_gens(const Vector& p, std::span<const Vector> gens) {
  if (gens.empty()) throw std::invalid_argument("convex hull of an empty generator list");
  for (const auto& g : gens) detail::require_same(p.dim(), g.dim());
}

}  // namespace

HullCertificate in_convex_hull(const Vector& p, std::span<const Vector> gens, double tol) {
  check_gens(p, gens);
  if (!(tol > 0.0)) throw std::invalid_argument("hull tolerance must be positive");
  const auto dim = static_cast<Eigen::Index>(p.dim());
  const auto m = gens.size();

  Eigen::MatrixXd q(dim, static_cast<Eigen::Index>(m));
  double scale = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    for (Eigen::Index r = 0; r < dim; ++r) q(r, static_cast<Eigen::Index>(i)) = gens[i][static_cast<std::size_t>(r)] - p[static_cast<std::size_t>(r)];
    scale = std::max(scale, q.col(static_cast<Eigen::Index>(i)).squaredNorm());
  }

  std::vector<Eigen::Index> active;
  std::vector<double> w;
  {
    Eigen::Index best = 0;
    q.colwise().squaredNorm().minCoeff(&best);
    active.push_back(best);
    w.push_back(1.0);
  }
  Eigen::VectorXd x = q.col(active[0]);

  const int max_major = 50 + 10 * static_cast<int>(m);
  for (int major = 0; major < max_major; ++major) {
    Eigen::Index j = 0;
    (x.transpose() * q).minCoeff(&j);
    if (x.squaredNorm() - x.dot(q.col(j)) <= 1e-13 * std::max(scale, 1e-300)) break;
    if (std::find(active.begin(), active.end(), j) != active.end()) break;
    active.push_back(j);
    w.push_back(0.0);

    for (int minor = 0; minor < 10 * static_cast<int>(m) + 10; ++minor) {
      Eigen::MatrixXd qs(dim, static_cast<Eigen::Index>(active.size()));
      for (std::size_t i = 0; i < active.size(); ++i) qs.col(static_cast<Eigen::Index>(i)) = q.col(active[i]);
      const Eigen::VectorXd alpha = affine_min_norm(qs);
      if ((alpha.array() > 1e-14).all()) {
        for (std::size_t i = 0; i < w.size(); ++i) w[i] = alpha[static_cast<Eigen::Index>(i)];
        x = qs * alpha;
        break;
      }
      double theta = 1.0;
      for (std::size_t i = 0; i < w.size(); ++i) {
        const double a = alpha[static_cast<Eigen::Index>(i)];
        if (a <= 1e-14 && w[i] - a > 0) theta = std::min(theta, w[i] / (w[i] - a));
      }
      for (std::size_t i = 0; i < w.size(); ++i) w[i] = theta * alpha[static_cast<Eigen::Index>(i)] + (1.0 - theta) * w[i];
      std::vector<Eigen::Index> keep_idx;
      std::vector<double> keep_w;
      for (std::size_t i = 0; i < w.size(); ++i)
        if (w[i] > 1e-15) {
          keep_idx.push_back(active[i]);
          keep_w.push_back(w[i]);
        }
      if (keep_idx.empty()) {  // numerically degenerate; fall back to the best single point
        keep_idx.push_back(active.back());
        keep_w.push_back(1.0);
      }
      active = std::move(keep_idx);
      w = std::move(keep_w);
      double total = 0.0;
      for (double v : w) total += v;
      x.setZero();
      for (std::size_t i = 0; i < active.size(); ++i) {
        w[i] /= total;
        x += w[i] * q.col(active[i]);
      }
    }
  }

  HullCertificate cert;
  cert.weights.assign(m, 0.0);
  for (std::size_t i = 0; i < active.size(); ++i) cert.weights[static_cast<std::size_t>(active[i])] = w[i];
  cert.residual = x.norm();
  cert.inside = cert.residual <= tol;
  return cert;
}

HullCertificate in_convex_hull_exhaustive(const Vector& p, std::span<const Vector> gens, double tol) {
  check_gens(p, gens);
  const std::size_t dim = p.dim();
  if (dim > 3) throw std::invalid_argument("exhaustive hull oracle is limited to dim <= 3");
  const std::size_t m = gens.size();
  const std::size_t max_k = std::min(dim + 1, m);

  HullCertificate best;
  best.residual = std::numeric_limits<double>::infinity();
  best.weights.assign(m, 0.0);

  std::vector<std::size_t> subset;
  auto consider = [&]() {
    const auto k = static_cast<Eigen::Index>(subset.size());
    Eigen::MatrixXd q(static_cast<Eigen::Index>(dim), k);
    for (Eigen::Index c = 0; c < k; ++c)
      for (std::size_t r = 0; r < dim; ++r) q(static_cast<Eigen::Index>(r), c) = gens[subset[static_cast<std::size_t>(c)]][r] - p[r];
    const Eigen::VectorXd a = affine_min_norm(q);
    if (!a.allFinite() || (a.array() < -1e-12).any()) return;
    if (std::abs(a.sum() - 1.0) > 1e-9) return;
    const double r = (q * a).norm();
    if (r < best.residual) {
      best.residual = r;
      std::fill(best.weights.begin(), best.weights.end(), 0.0);
      for (Eigen::Index c = 0; c < k; ++c) best.weights[subset[static_cast<std::size_t>(c)]] = std::max(0.0, a[c]);
    }
  };
  auto recurse = [&](auto&& self, std::size_t start) -> void {
    if (!subset.empty()) consider();
    if (subset.size() == max_k) return;
    for (std::size_t i = start; i < m; ++i) {
      subset.push_back(i);
      self(self, i + 1);
      subset.pop_back();
    }
  };
  recurse(recurse, 0);
  best.inside = best.residual <= tol;
  return best;
}

// ---------------------------------------------------------------------------

namespace {

struct NormalizedRows {
  Eigen::MatrixXd a;  // m x n, unit rows
  Eigen::VectorXd b;
  double bmax = 0.0;
};

NormalizedRows normalize_rows(std::size_t dim, std::span<const Vector> normals, std::span<const double> offsets) {
  if (normals.size() != offsets.size()) throw std::invalid_argument("normals/offsets size mismatch");
  NormalizedRows r;
  r.a.resize(static_cast<Eigen::Index>(normals.size()), static_cast<Eigen::Index>(dim));
  r.b.resize(static_cast<Eigen::Index>(normals.size()));
  for (std::size_t i = 0; i < normals.size(); ++i) {
    detail::require_same(dim, normals[i].dim());
    const double nrm = normals[i].norm();
    if (!(nrm > 0.0)) throw std::invalid_argument("polyhedron row with a zero normal");
    for (std::size_t j = 0; j < dim; ++j) r.a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = normals[i][j] / nrm;
    r.b[static_cast<Eigen::Index>(i)] = offsets[i] / nrm;
    r.bmax = std::max(r.bmax, std::abs(r.b[static_cast<Eigen::Index>(i)]));
  }
  return r;
}

Point to_point(const Eigen::VectorXd& v) {
  std::vector<double> c(static_cast<std::size_t>(v.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) c[static_cast<std::size_t>(i)] = v[i];
  return Point(std::move(c));
}

}  // namespace

Projection project_onto_polyhedron(const Point& y, std::span<const Vector> normals, std::span<const double> offsets) {
  const std::size_t dim = y.dim();
  const NormalizedRows rows = normalize_rows(dim, normals, offsets);
  const Eigen::Index m = rows.a.rows();
  const Eigen::VectorXd y0 = to_eigen(y.coords());
  Eigen::VectorXd z = y0;

  const double scale = 1.0 + y0.norm() + rows.bmax;
  const double feas_tol = 1e-13 * scale;

  std::vector<Eigen::Index> active;
  std::vector<double> u;
  bool feasible = true;
  const int max_outer = 100 + 20 * static_cast<int>(m);

  for (int outer = 0; outer < max_outer; ++outer) {
    Eigen::Index p = -1;
    double worst = feas_tol;
    for (Eigen::Index i = 0; i < m; ++i) {
      const double s = rows.a.row(i).dot(z) - rows.b[i];
      if (s > worst) {
        worst = s;
        p = i;
      }
    }
    if (p < 0) break;

    // GI form: n+ = -a_p, constraint n+ . z >= -b_p.
    const Eigen::VectorXd nplus = -rows.a.row(p).transpose();
    std::vector<double> uplus = u;
    uplus.push_back(0.0);

    bool added = false;
    for (int inner = 0; inner < 10 * static_cast<int>(m) + 10 && !added; ++inner) {
      const auto k = static_cast<Eigen::Index>(active.size());
      Eigen::VectorXd r(k);
      Eigen::VectorXd d = nplus;
      if (k > 0) {
        Eigen::MatrixXd nmat(static_cast<Eigen::Index>(dim), k);
        for (Eigen::Index c = 0; c < k; ++c) nmat.col(c) = -rows.a.row(active[static_cast<std::size_t>(c)]).transpose();
        r = (nmat.transpose() * nmat).ldlt().solve(nmat.transpose() * nplus);
        d = nplus - nmat * r;
      }
      double t1 = std::numeric_limits<double>::infinity();
      Eigen::Index drop = -1;
      for (Eigen::Index c = 0; c < k; ++c) {
        if (r[c] > 1e-14) {
          const double ratio = uplus[static_cast<std::size_t>(c)] / r[c];
          if (ratio < t1) {
            t1 = ratio;
            drop = c;
          }
        }
      }
      const double sval = nplus.dot(z) + rows.b[p];  // negative while violated
      const double dn = d.dot(nplus);
      const double t2 = dn > 1e-20 ? -sval / dn : std::numeric_limits<double>::infinity();
      if (std::isinf(t1) && std::isinf(t2)) {
        feasible = false;
        break;
      }
      const double t = std::min(t1, t2);
      if (std::isfinite(t2)) z += t * d;
      for (Eigen::Index c = 0; c < k; ++c) uplus[static_cast<std::size_t>(c)] -= t * r[c];
      uplus.back() += t;
      if (t2 <= t1) {
        active.push_back(p);
        u = uplus;
        added = true;
      } else {
        active.erase(active.begin() + drop);
        uplus.erase(uplus.begin() + drop);
      }
    }
    if (!feasible) break;
  }

  double violation = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) violation = std::max(violation, rows.a.row(i).dot(z) - rows.b[i]);

  Projection out;
  out.point = to_point(z);
  out.distance = (z - y0).norm();
  out.feasible = feasible && violation <= 1e-9 * scale;
  out.bound = std::max(0.0, violation) + 64.0 * kEps * (scale + z.norm());
  return out;
}

Projection project_onto_polyhedron_enumerate(const Point& y, std::span<const Vector> normals,
                                             std::span<const double> offsets) {
  const std::size_t dim = y.dim();
  const NormalizedRows rows = normalize_rows(dim, normals, offsets);
  const auto m = static_cast<std::size_t>(rows.a.rows());
  const Eigen::VectorXd y0 = to_eigen(y.coords());
  const double scale = 1.0 + y0.norm() + rows.bmax;
  const double feas_tol = 1e-10 * scale;

  Projection best;
  best.distance = std::numeric_limits<double>::infinity();
  best.feasible = false;

  auto feasible_point = [&](const Eigen::VectorXd& z) {
    for (std::size_t i = 0; i < m; ++i)
      if (rows.a.row(static_cast<Eigen::Index>(i)).dot(z) - rows.b[static_cast<Eigen::Index>(i)] > feas_tol) return false;
    return true;
  };

  std::vector<std::size_t> subset;
  auto consider = [&]() {
    Eigen::VectorXd z = y0;
    if (!subset.empty()) {
      const auto k = static_cast<Eigen::Index>(subset.size());
      Eigen::MatrixXd as(k, static_cast<Eigen::Index>(dim));
      Eigen::VectorXd bs(k);
      for (Eigen::Index c = 0; c < k; ++c) {
        as.row(c) = rows.a.row(static_cast<Eigen::Index>(subset[static_cast<std::size_t>(c)]));
        bs[c] = rows.b[static_cast<Eigen::Index>(subset[static_cast<std::size_t>(c)])];
      }
      const Eigen::MatrixXd gram = as * as.transpose();
      Eigen::FullPivLU<Eigen::MatrixXd> lu(gram);
      if (lu.rank() < k) return;
      const Eigen::VectorXd mu = lu.solve(as * y0 - bs);
      z = y0 - as.transpose() * mu;
    }
    if (!feasible_point(z)) return;
    const double d = (z - y0).norm();
    if (d < best.distance) {
      best.distance = d;
      best.point = to_point(z);
      best.feasible = true;
    }
  };
  auto recurse = [&](auto&& self, std::size_t start) -> void {
    consider();
    if (subset.size() == dim) return;
    for (std::size_t i = start; i < m; ++i) {
      subset.push_back(i);
      self(self, i + 1);
      subset.pop_back();
    }
  };
  recurse(recurse, 0);
  best.bound = 64.0 * kEps * scale;
  return best;
}

double distance_to_conic_hull(const Vector& v, std::span<const Vector> gens) {
  const std::size_t dim = v.dim();
  const std::size_t k = gens.size();
  if (k == 0) return v.norm();
  Eigen::MatrixXd g(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(k));
  for (std::size_t c = 0; c < k; ++c) {
    detail::require_same(dim, gens[c].dim());
    for (std::size_t r = 0; r < dim; ++r) g(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = gens[c][r];
  }
  const Eigen::VectorXd target = to_eigen(v.comps());

  // Lawson-Hanson active set.
  std::vector<bool> passive(k, false);
  Eigen::VectorXd lam = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(k));
  const double tol = 1e-13 * (1.0 + target.norm()) * (1.0 + g.norm());

  auto solve_passive = [&](Eigen::VectorXd& s) {
    std::vector<Eigen::Index> idx;
    for (std::size_t i = 0; i < k; ++i)
      if (passive[i]) idx.push_back(static_cast<Eigen::Index>(i));
    s = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(k));
    if (idx.empty()) return;
    Eigen::MatrixXd gp(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(idx.size()));
    for (std::size_t c = 0; c < idx.size(); ++c) gp.col(static_cast<Eigen::Index>(c)) = g.col(idx[c]);
    const Eigen::VectorXd sp = gp.completeOrthogonalDecomposition().solve(target);
    for (std::size_t c = 0; c < idx.size(); ++c) s[idx[c]] = sp[static_cast<Eigen::Index>(c)];
  };

  for (std::size_t outer = 0; outer < 3 * k + 10; ++outer) {
    const Eigen::VectorXd w = g.transpose() * (target - g * lam);
    Eigen::Index j = -1;
    double wmax = tol;
    for (std::size_t i = 0; i < k; ++i)
      if (!passive[i] && w[static_cast<Eigen::Index>(i)] > wmax) {
        wmax = w[static_cast<Eigen::Index>(i)];
        j = static_cast<Eigen::Index>(i);
      }
    if (j < 0) break;
    passive[static_cast<std::size_t>(j)] = true;
    Eigen::VectorXd s;
    for (std::size_t inner = 0; inner < 3 * k + 10; ++inner) {
      solve_passive(s);
      bool ok = true;
      for (std::size_t i = 0; i < k; ++i)
        if (passive[i] && s[static_cast<Eigen::Index>(i)] <= 0) ok = false;
      if (ok) break;
      double alpha = 1.0;
      for (std::size_t i = 0; i < k; ++i) {
        const auto ii = static_cast<Eigen::Index>(i);
        if (passive[i] && s[ii] <= 0) alpha = std::min(alpha, lam[ii] / (lam[ii] - s[ii]));
      }
      lam += alpha * (s - lam);
      for (std::size_t i = 0; i < k; ++i)
        if (passive[i] && lam[static_cast<Eigen::Index>(i)] <= 1e-15) {
          passive[i] = false;
          lam[static_cast<Eigen::Index>(i)] = 0.0;
        }
    }
    lam = s.cwiseMax(0.0);
  }
  return (target - g * lam).norm();
}

// ---------------------------------------------------------------------------

std::vector<Vector> sphere_directions(std::size_t dim, std::size_t count) {
  std::vector<Vector> out;
  if (dim == 0) return out;
  if (dim == 1) return {Vector{1.0}, Vector{-1.0}};
  out.reserve(count);
  if (dim == 2) {
    for (std::size_t k = 0; k < count; ++k) {
      const double th = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(count);
      out.push_back(Vector{std::cos(th), std::sin(th)});
    }
    return out;
  }
  if (dim == 3) {
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (std::size_t i = 0; i < count; ++i) {
      const double z = 1.0 - (2.0 * static_cast<double>(i) + 1.0) / static_cast<double>(count);
      const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      const double phi = golden * static_cast<double>(i);
      out.push_back(Vector{r * std::cos(phi), r * std::sin(phi), z});
    }
    return out;
  }
  std::mt19937_64 rng(0x5eedULL + dim);
  std::normal_distribution<double> gauss;
  while (out.size() < count) {
    Vector v(dim);
    for (std::size_t i = 0; i < dim; ++i) v[i] = gauss(rng);
    if (v.norm() > 1e-6) out.push_back(v.normalized());
  }
  return out;
}

std::vector<Vector> orthogonal_complement(std::span<const Vector> rows, std::size_t dim, double tol) {
  std::vector<Vector> out;
  if (rows.empty()) {
    for (std::size_t i = 0; i < dim; ++i) out.push_back(Vector::basis(dim, i));
    return out;
  }
  Eigen::MatrixXd a(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(dim));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    detail::require_same(dim, rows[i].dim());
    const double n = std::max(rows[i].norm(), 1e-300);
    for (std::size_t j = 0; j < dim; ++j) a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j] / n;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv[i] > tol) ++rank;
  const Eigen::MatrixXd& v = svd.matrixV();
  for (Eigen::Index c = rank; c < static_cast<Eigen::Index>(dim); ++c) {
    std::vector<double> comps(dim);
    for (std::size_t j = 0; j < dim; ++j) comps[j] = v(static_cast<Eigen::Index>(j), c);
    out.emplace_back(std::move(comps));
  }
  return out;
}

}  // namespace tangency

namespace tangency {

namespace {

template <class F>
void for_each_subset(std::size_t n, std::size_t k, F&& f) {
  std::vector<std::size_t> idx(k);
  auto rec = [&](auto&& self, std::size_t pos, std::size_t start) -> void {
    if (pos == k) {
      f(idx);
      return;
    }
    for (std::size_t i = start; i + (k - pos) <= n; ++i) {
      idx[pos] = i;
      self(self, pos + 1, i + 1);
    }
  };
  rec(rec, 0, 0);
}

void push_unique(std::vector<Vector>& out, const Vector& v, double tol) {
  for (const auto& w : out)
    if ((w - v).norm() <= tol) return;
  out.push_back(v);
}

}  // namespace

std::vector<Vector> polyhedral_cone_generators(std::span<const Vector> normals, std::size_t dim, double tol) {
  std::vector<Vector> unit;
  for (const auto& n : normals) {
    detail::require_same(dim, n.dim());
    if (n.norm() > 0.0) unit.push_back(n.normalized());
  }
  const std::vector<Vector> lineality = orthogonal_complement(unit, dim);
  std::vector<Vector> out;
  for (const auto& l : lineality) {
    out.push_back(l);
    out.push_back(-l);
  }
  if (unit.empty() || lineality.size() == dim) return out;

  // Work in the row space R = lineality-perp; extreme rays of the pointed part
  // have r-1 independent active rows, r = dim R.
  const std::vector<Vector> row_basis = orthogonal_complement(lineality, dim);
  const std::size_t r = row_basis.size();
  auto in_cone = [&](const Vector& d) {
    for (const auto& n : unit)
      if (dot(n, d) > tol) return false;
    return true;
  };
  std::vector<Vector> rays;
  for_each_subset(unit.size(), r - 1, [&](const std::vector<std::size_t>& sub) {
    std::vector<Vector> rows(lineality);
    for (std::size_t i : sub) rows.push_back(unit[i]);
    const std::vector<Vector> null = orthogonal_complement(rows, dim);
    if (null.size() != 1) return;
    for (double s : {1.0, -1.0}) {
      const Vector d = s * null[0];
      if (in_cone(d)) push_unique(rays, d, 1e-9);
    }
  });
  for (auto& d : rays) out.push_back(d);
  return out;
}

VertexList polyhedron_vertices(std::span<const Vector> normals, std::span<const double> offsets, std::size_t dim) {
  if (normals.size() != offsets.size()) throw std::invalid_argument("normals/offsets size mismatch");
  VertexList out;
  const std::size_t m = normals.size();
  double bmax = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    detail::require_same(dim, normals[i].dim());
    bmax = std::max(bmax, std::abs(offsets[i]) / normals[i].norm());
  }
  const double feas_tol = 1e-10 * (1.0 + bmax);

  std::vector<Vector> recession_gens = polyhedral_cone_generators(normals, dim);
  out.bounded = recession_gens.empty();
  if (m < dim) return out;

  for_each_subset(m, dim, [&](const std::vector<std::size_t>& sub) {
    Eigen::MatrixXd a(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    Eigen::VectorXd b(static_cast<Eigen::Index>(dim));
    for (std::size_t r = 0; r < dim; ++r) {
      const double nrm = normals[sub[r]].norm();
      for (std::size_t c = 0; c < dim; ++c)
        a(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = normals[sub[r]][c] / nrm;
      b[static_cast<Eigen::Index>(r)] = offsets[sub[r]] / nrm;
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
    if (lu.rank() < static_cast<Eigen::Index>(dim)) return;
    const Eigen::VectorXd z = lu.solve(b);
    Point p = to_point(z);
    for (std::size_t i = 0; i < m; ++i)
      if (dot(normals[i], p.as_vector()) / normals[i].norm() - offsets[i] / normals[i].norm() > feas_tol) return;
    for (const auto& q : out.vertices)
      if (distance(p, q) <= 1e-9 * (1.0 + bmax)) return;
    out.vertices.push_back(std::move(p));
  });
  return out;
}

}  // namespace tangency
