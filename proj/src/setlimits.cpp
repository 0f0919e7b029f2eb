#include "tangency/setlimits.hpp"

#include <fmt/format.h>
#include <fmt/ranges.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace tangency::setlimits {

using sets::SetRep;

Schedule Schedule::geometric(double base, double ratio, std::size_t length) {
  if (!(base > 0.0) || !(ratio > 1.0)) throw std::invalid_argument("schedule needs base > 0 and ratio > 1");
  Schedule s;
  for (std::size_t j = 0; j < length; ++j) s.lambdas.push_back(base * std::pow(ratio, static_cast<double>(j)));
  return s;
}

Schedule Schedule::standard() { return geometric(8.0, 2.0, 18); }

std::size_t Schedule::tail_begin() const {
  const std::size_t n = lambdas.size();
  return n - std::max<std::size_t>(1, n / 4);
}

void Schedule::validate(std::size_t min_length) const {
  if (lambdas.size() < min_length)
    throw std::invalid_argument(fmt::format("schedule has {} entries, needs at least {}", lambdas.size(), min_length));
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    if (!std::isfinite(lambdas[i]) || !(lambdas[i] > 0.0)) throw std::invalid_argument("schedule entries must be positive");
    if (i > 0 && !(lambdas[i] > lambdas[i - 1])) throw std::invalid_argument("schedule must be strictly increasing");
  }
}

SetFamily::SetFamily(const Generator& g, Schedule s) : schedule_(std::move(s)) {
  schedule_.validate(1);
  for (std::size_t j = 0; j < schedule_.size(); ++j) members_.push_back(g(schedule_.lambdas[j], j));
  for (const auto& m : members_) detail::require_same(members_.front().dim(), m.dim());
}

SetFamily::SetFamily(std::vector<SetRep> members, Schedule s) : schedule_(std::move(s)), members_(std::move(members)) {
  schedule_.validate(1);
  if (members_.size() != schedule_.size()) throw std::invalid_argument("family size differs from its schedule");
  for (const auto& m : members_) detail::require_same(members_.front().dim(), m.dim());
}

SetFamily SetFamily::blow_up(const SetRep& a, const Point& x, Schedule s) {
  return SetFamily([&](double lam, std::size_t) { return sets::homothety(a, x, lam); }, std::move(s));
}

SetFamily SetFamily::constant(const SetRep& a, Schedule s) {
  return SetFamily([&](double, std::size_t) { return a; }, std::move(s));
}

const char* to_string(LimitRule r) { return r == LimitRule::Lim ? "lim->0" : "liminf->0"; }

namespace {

LimitVerdict limit_member(const Point& y, const SetFamily& f, double tol, LimitRule rule) {
  if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
  f.schedule().validate(8);
  LimitVerdict v;
  v.rule = rule;
  for (std::size_t j = 0; j < f.size(); ++j) {
    const sets::Distance d = sets::distance_to_set(y, f.at(j));
    v.trace.push_back({f.schedule().lambdas[j], d.value, d.bound});
  }
  const std::size_t t0 = f.schedule().tail_begin();
  double stat = rule == LimitRule::Lim ? 0.0 : std::numeric_limits<double>::infinity();
  double bound = 0.0;
  for (std::size_t j = t0; j < v.trace.size(); ++j) {
    stat = rule == LimitRule::Lim ? std::max(stat, v.trace[j].distance) : std::min(stat, v.trace[j].distance);
    bound = std::max(bound, v.trace[j].bound);
  }
  v.tail_value = stat;
  v.member = stat <= tol;
  v.verdict = bound > tol ? Verdict::Inconclusive : (v.member ? Verdict::Pass : Verdict::Fail);
  return v;
}

}  // namespace

LimitVerdict lower_limit_member(const Point& y, const SetFamily& f, double tol) {
  return limit_member(y, f, tol, LimitRule::Lim);
}

LimitVerdict upper_limit_member(const Point& y, const SetFamily& f, double tol) {
  return limit_member(y, f, tol, LimitRule::LimInf);
}

SetRep ls_countable(const std::vector<SetRep>& seq, double tol, std::size_t density, std::uint64_t seed) {
  const std::size_t n = seq.size();
  if (n < 8) throw std::invalid_argument("ls_countable needs a sequence of length >= 8");
  const std::size_t dim = seq.front().dim();
  const std::size_t tail = n - std::max<std::size_t>(1, n / 4);
  std::vector<Point> kept;
  for (std::size_t k = n / 2; k < n; ++k) {
    if (seq[k].is_empty()) continue;
    for (const Point& p : sets::sample(seq[k], density, seed + k)) {
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t m = tail; m < n && best > tol; ++m) best = std::min(best, sets::distance(p, seq[m]));
      if (best <= tol) {
        const bool dup = std::any_of(kept.begin(), kept.end(), [&](const Point& q) { return q == p; });
        if (!dup) kept.push_back(p);
      }
    }
  }
  if (kept.empty()) return SetRep::empty(dim);
  return SetRep::point_cloud(std::move(kept));
}

namespace {

std::vector<Point> hausdorff_samples(const SetRep& a, std::size_t density, std::uint64_t seed) {
  if (const auto* c = std::get_if<sets::PointCloud>(&a.variant())) return c->points;
  return sets::sample(a, density, seed);
}

}  // namespace

double hausdorff_distance(const SetRep& a, const SetRep& b, std::size_t density, std::uint64_t seed) {
  detail::require_same(a.dim(), b.dim());
  if (density < 100) throw std::invalid_argument("hausdorff density must be >= 100");
  if (!a.bounded() || !b.bounded()) throw sets::UnboundedSet("hausdorff distance needs bounded sets");
  if (a.is_empty() || b.is_empty())
    return a.is_empty() && b.is_empty() ? 0.0 : std::numeric_limits<double>::infinity();
  double h = 0.0;
  for (const auto& p : hausdorff_samples(a, density, seed)) h = std::max(h, sets::distance(p, b));
  for (const auto& p : hausdorff_samples(b, density, seed + 1)) h = std::max(h, sets::distance(p, a));
  return h;
}

Report convergence_check(const SetFamily& f, const SetRep& a, double tol, std::size_t density, std::uint64_t seed) {
  f.schedule().validate(8);
  Report r;
  r.title = "convergence";
  r.tolerances = {{"tol", tol}, {"density", static_cast<double>(density)}};

  // (a) Ls F subset A: samples of the tail members.
  const std::size_t t0 = f.schedule().tail_begin();
  const std::size_t per = std::max<std::size_t>(1, density / (f.size() - t0));
  Verdict va = Verdict::Pass;
  std::string da = "every tail sample lies within tol of A";
  double worst_a = 0.0;
  for (std::size_t j = t0; j < f.size() && va != Verdict::Fail; ++j) {
    if (f.at(j).is_empty()) continue;
    for (const auto& p : sets::sample(f.at(j), per, seed + j)) {
      const sets::Distance d = sets::distance_to_set(p, a);
      worst_a = std::max(worst_a, d.value);
      if (d.value > tol + d.bound) {
        va = Verdict::Fail;
        da = fmt::format("point {} of the upper limit is at distance {:.6g} from A", fmt::join(p.coords(), ","), d.value);
        r.witness_points.push_back(p);
        break;
      }
      if (d.bound > tol) va = combine(va, Verdict::Inconclusive);
    }
  }
  r.add_check("Ls subset A", va, da);

  // (b) A subset Li F.
  Verdict vb = Verdict::Pass;
  std::string db = "every sample of A is a lower-limit member";
  if (!a.is_empty()) {
    for (const auto& p : sets::sample(a, density, seed + 101)) {
      const LimitVerdict lv = lower_limit_member(p, f, tol);
      if (lv.verdict == Verdict::Fail) {
        vb = Verdict::Fail;
        db = fmt::format("point {} of A has tail max distance {:.6g}", fmt::join(p.coords(), ","), lv.tail_value);
        r.witness_points.push_back(p);
        break;
      }
      vb = combine(vb, lv.verdict);
    }
  }
  r.add_check("A subset Li", vb, db);
  r.set_value("max_distance_ls_to_a", worst_a);
  r.settle();
  r.message = r.verdict == Verdict::Pass ? "Ls subset A subset Li holds on samples" : r.checks[va == Verdict::Pass ? 1 : 0].detail;
  return r;
}

}  // namespace tangency::setlimits
