#pragma once

// Kuratowski lower and upper limits of indexed set families, evaluated on a
// finite increasing schedule. The last quarter of the schedule is the tail:
// lower limits require the tail maximum of d(y, A_lambda) to be small,
// upper limits only the tail minimum.

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "tangency/report.hpp"
#include "tangency/sets.hpp"

namespace tangency::setlimits {

struct Schedule {
  std::vector<double> lambdas;

  /// lambda_j = base * ratio^j, j = 0..length-1.
  static Schedule geometric(double base, double ratio, std::size_t length);
  /// 2^j for j = 3..20.
  static Schedule standard();

  std::size_t size() const { return lambdas.size(); }
  /// First index of the tail (last quarter, at least one entry).
  std::size_t tail_begin() const;
  /// Throws unless strictly increasing, finite, positive and of length >= min_length.
  void validate(std::size_t min_length = 8) const;
};

class SetFamily {
 public:
  using Generator = std::function<sets::SetRep(double lambda, std::size_t index)>;

  SetFamily(const Generator& g, Schedule s);
  SetFamily(std::vector<sets::SetRep> members, Schedule s);

  /// lambda -> x + lambda (A - x).
  static SetFamily blow_up(const sets::SetRep& a, const Point& x, Schedule s);
  static SetFamily constant(const sets::SetRep& a, Schedule s);

  const Schedule& schedule() const { return schedule_; }
  const sets::SetRep& at(std::size_t j) const { return members_.at(j); }
  std::size_t size() const { return members_.size(); }
  std::size_t dim() const { return members_.front().dim(); }

 private:
  Schedule schedule_;
  std::vector<sets::SetRep> members_;
};

enum class LimitRule { Lim, LimInf };
const char* to_string(LimitRule r);

struct TraceEntry {
  double lambda = 0.0;
  double distance = 0.0;
  double bound = 0.0;
};

struct LimitVerdict {
  bool member = false;
  Verdict verdict = Verdict::Fail;  // Pass iff member, Inconclusive when oracle bounds exceed tol
  LimitRule rule = LimitRule::Lim;
  double tail_value = 0.0;  // tail max (Lim) or tail min (LimInf)
  std::vector<TraceEntry> trace;
};

LimitVerdict lower_limit_member(const Point& y, const SetFamily& f, double tol);
LimitVerdict upper_limit_member(const Point& y, const SetFamily& f, double tol);

/// Points sampled from the members k >= N/2 whose distance to the tail union
/// (last quarter of the sequence) is at most tol. `density` samples per member.
sets::SetRep ls_countable(const std::vector<sets::SetRep>& seq, double tol, std::size_t density = 200,
                          std::uint64_t seed = 1);

/// Sampled Hausdorff distance; point clouds are used in full, so two clouds
/// give the exact value.
double hausdorff_distance(const sets::SetRep& a, const sets::SetRep& b, std::size_t density, std::uint64_t seed = 1);

/// Sandwich test Ls F subset A subset Li F on samples.
Report convergence_check(const SetFamily& f, const sets::SetRep& a, double tol, std::size_t density,
                         std::uint64_t seed = 1);

}  // namespace tangency::setlimits
