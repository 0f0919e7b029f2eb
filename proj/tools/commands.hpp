#pragma once

#include <nlohmann/json.hpp>

#include <optional>
#include <string>
#include <vector>

#include "problem.hpp"
#include "tangency/report.hpp"

namespace tangency::cli {

using ojson = nlohmann::ordered_json;

/// Exit codes beyond the verdicts 0 / 1 / 2.
inline constexpr int kUsageError = 64;
inline constexpr int kInputError = 65;
inline constexpr int kInternalError = 70;

/// Subcommand switches that are not tolerances.
struct Switches {
  std::string mode;   // regula: max | min (empty: params or max)
  std::string rule;   // limit: lower | upper | sandwich (empty: sandwich when a set is given, else upper)
  std::string kind = "frechet";  // deriv: frechet | peano | strict | directional
};

struct Outcome {
  std::string command;
  Report report;
  ojson header;   // effective inputs and tolerances
  ojson payload;  // command-specific structured output
  std::vector<std::string> csv_columns;
  std::vector<std::vector<std::string>> csv_rows;
  bool regula_labels = false;  // SATISFIED / VIOLATED instead of PASS / FAIL
};

std::string verdict_label(const Outcome& o);
std::string render_text(const Outcome& o);
std::string render_csv(const Outcome& o);
std::string render_json(const Outcome& o);
/// "text", "csv", "json-like" (also "json").
std::string render(const Outcome& o, const std::string& format);

ojson report_json(const Report& r);
std::string csv_number(double v);

Outcome cmd_cone(const ProblemFile& pf, const Params& flags);
Outcome cmd_limit(const ProblemFile& pf, const Params& flags, const Switches& sw);
Outcome cmd_hausdorff(const ProblemFile& pf, const Params& flags);
Outcome cmd_deriv(const ProblemFile& pf, const Params& flags, const Switches& sw);
Outcome cmd_regula(const ProblemFile& pf, const Params& flags, const Switches& sw);
Outcome cmd_props(const ProblemFile& pf, const Params& flags);
Outcome cmd_counterexample(const Params& flags);

struct DemoOptions {
  std::string goldens;
  std::optional<std::string> out;
  std::string format = "json-like";
  bool update_goldens = false;
  /// Overrides the distance tolerance of the sampled-cone cases.
  std::optional<double> cone_tol;
};

/// Runs the curated cases; returns the exit code.
int run_demo(const DemoOptions& opt, std::ostream& out, std::ostream& err);

/// Full command line (without the program name); returns the exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tangency::cli
