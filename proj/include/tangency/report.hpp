#pragma once

#include <string>
#include <utility>
#include <vector>

#include "tangency/geometry.hpp"

namespace tangency {

enum class Verdict { Pass, Fail, Inconclusive };

const char* to_string(Verdict v);
/// 0 / 1 / 2, matching the command-line exit codes.
int exit_code(Verdict v);
/// Fail dominates Inconclusive, which dominates Pass.
Verdict combine(Verdict a, Verdict b);

struct Check {
  std::string name;
  Verdict verdict = Verdict::Pass;
  std::string detail;
};

struct Report {
  std::string title;
  Verdict verdict = Verdict::Pass;
  std::string message;
  double slack = 0.0;
  std::vector<Check> checks;
  std::vector<std::pair<std::string, double>> values;       // named numeric results
  std::vector<std::pair<std::string, double>> tolerances;   // effective tolerances, echoed
  std::vector<Point> witness_points;
  std::vector<Vector> witness_directions;

  void add_check(std::string name, Verdict v, std::string detail = {});
  void set_value(const std::string& key, double v);
  double value(const std::string& key) const;
  bool has_value(const std::string& key) const;
  /// Recomputes `verdict` from the checks (no-op when there are none).
  void settle();
};

}  // namespace tangency
