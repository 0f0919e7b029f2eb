#pragma once

// Problem files: JSON with the keys dim, function, set, other_set, point,
// family and params. Unknown keys are rejected; every error names the key
// path and, where it can be located, the line.

#include <nlohmann/json.hpp>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "tangency/field.hpp"
#include "tangency/setlimits.hpp"
#include "tangency/sets.hpp"

namespace tangency::cli {

class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Tolerances and schedule settings; unset fields fall back to per-command
/// defaults, and the effective values are echoed in every report.
struct Params {
  std::optional<double> tol;
  std::optional<double> angular_tol;
  std::optional<double> distance_tol;
  std::optional<double> curvature_slack;
  std::optional<double> schedule_base;
  std::optional<double> schedule_ratio;
  std::optional<std::size_t> schedule_len;
  std::optional<std::size_t> samples;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> mode;
  std::optional<int> order;
  std::optional<std::vector<double>> direction;
  std::optional<bool> force_sampled;

  /// Fields set in `over` replace ours.
  void merge(const Params& over);
};

struct Family {
  std::optional<setlimits::Schedule> schedule;  // explicit "lambdas" list
  std::optional<double> base;
  std::optional<double> ratio;
  std::optional<std::size_t> length;
  /// Set description whose numbers may be expressions in lam (or pi).
  std::optional<nlohmann::json> templ;
  /// Members cycled along the schedule.
  std::vector<sets::SetRep> members;

  setlimits::SetFamily build(const setlimits::Schedule& s, std::size_t dim) const;
};

struct ProblemFile {
  std::string path;
  std::size_t dim = 0;
  std::optional<std::string> function_text;
  std::optional<ScalarField> function;
  std::optional<sets::SetRep> set;
  std::optional<sets::SetRep> other_set;
  std::optional<Point> point;
  std::optional<Family> family;
  Params params;
};

/// Throws InputError for missing files, malformed JSON and schema errors.
ProblemFile load_problem(const std::string& path);
ProblemFile parse_problem(const std::string& text, const std::string& origin = "<input>");

/// Set description (with its key path for messages). Numbers may be strings
/// evaluated with `lam` when `lam` is given.
sets::SetRep parse_set(const nlohmann::json& j, std::size_t dim, const std::string& key,
                       std::optional<double> lam = std::nullopt);

/// Built-in field name, or an expression in x1..x{dim}.
ScalarField parse_function(const std::string& text, std::size_t dim);

}  // namespace tangency::cli
