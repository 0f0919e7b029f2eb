#include <CLI11.hpp>
#include <fmt/format.h>

#include <fstream>
#include <ostream>

#include "commands.hpp"
#include "tangency/calculus.hpp"
#include "tangency/expr.hpp"

#ifndef TANGENCY_GOLDEN_DIR
#define TANGENCY_GOLDEN_DIR "goldens"
#endif

namespace tangency::cli {

namespace {

struct Flags {
  std::string problem;
  double tol = 0, angular_tol = 0, schedule_base = 0;
  std::size_t schedule_len = 0, samples = 0;
  std::uint64_t seed = 0;
  std::string out;
  std::string format = "text";
  std::vector<CLI::Option*> opts;

  Params params() const {
    Params p;
    auto given = [&](const char* name) {
      for (auto* o : opts)
        if (o->check_name(name) && o->count() > 0) return true;
      return false;
    };
    if (given("--tol")) p.tol = tol;
    if (given("--angular-tol")) p.angular_tol = angular_tol;
    if (given("--schedule-base")) p.schedule_base = schedule_base;
    if (given("--schedule-len")) p.schedule_len = schedule_len;
    if (given("--samples")) p.samples = samples;
    if (given("--seed")) p.seed = seed;
    return p;
  }
};

void add_common(CLI::App* sub, Flags& f, bool with_problem) {
  if (with_problem)
    f.opts.push_back(sub->add_option("--problem,-p", f.problem, "problem file (JSON)")->required());
  f.opts.push_back(sub->add_option("--tol", f.tol, "main tolerance of the subcommand")->check(CLI::PositiveNumber));
  f.opts.push_back(sub->add_option("--angular-tol", f.angular_tol, "angular tolerance (radians)")->check(CLI::PositiveNumber));
  f.opts.push_back(sub->add_option("--schedule-base", f.schedule_base, "first scale of the schedule")->check(CLI::PositiveNumber));
  f.opts.push_back(sub->add_option("--schedule-len", f.schedule_len, "number of scales")->check(CLI::PositiveNumber));
  f.opts.push_back(sub->add_option("--samples", f.samples, "samples per scale / density")->check(CLI::PositiveNumber));
  f.opts.push_back(sub->add_option("--seed", f.seed, "random seed"));
  f.opts.push_back(sub->add_option("--out", f.out, "machine-readable output path"));
  f.opts.push_back(sub->add_option("--format", f.format, "output format for --out")
                       ->check(CLI::IsMember({"text", "csv", "json-like", "json"})));
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream o(path, std::ios::binary);
  if (!o) throw std::ios_base::failure("cannot write " + path);
  o << text;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Tangent cones, set limits, differentials and first-order extremum conditions", "tangency"};
  app.require_subcommand(1);
  Flags f;
  Switches sw;
  std::vector<double> direction;
  int order = 1;
  DemoOptions demo;
  demo.goldens = TANGENCY_GOLDEN_DIR;
  std::string demo_out = "demo-output";
  double demo_tol = 0;

  auto* cone = app.add_subcommand("cone", "upper, lower and Federer cones with the contingent directions");
  add_common(cone, f, true);
  auto* limit = app.add_subcommand("limit", "lower / upper limit membership or the sandwich test for a family");
  add_common(limit, f, true);
  limit->add_option("--rule", sw.rule, "lower | upper | sandwich")->check(CLI::IsMember({"lower", "upper", "sandwich"}));
  auto* haus = app.add_subcommand("hausdorff", "sampled Hausdorff distance");
  add_common(haus, f, true);
  auto* deriv = app.add_subcommand("deriv", "differentiability checks");
  add_common(deriv, f, true);
  deriv->add_option("--kind", sw.kind, "frechet | peano | strict | directional")
      ->check(CLI::IsMember({"frechet", "peano", "strict", "directional"}));
  auto* order_opt = deriv->add_option("--order", order, "Peano order")->check(CLI::Range(0, 6));
  auto* dir_opt = deriv->add_option("--direction", direction, "direction v (comma separated)")->delimiter(',');
  auto* reg = app.add_subcommand("regula", "first-order necessary condition at a point");
  add_common(reg, f, true);
  reg->add_option("--mode", sw.mode, "max | min")->check(CLI::IsMember({"max", "min"}));
  auto* props = app.add_subcommand("props", "the eight tangent-cone properties");
  add_common(props, f, true);
  auto* counter = app.add_subcommand("counterexample", "chain rule for Gateaux differentials fails");
  add_common(counter, f, false);
  auto* demo_cmd = app.add_subcommand("demo", "curated example suite checked against the goldens");
  demo_cmd->add_option("--out", demo_out, "directory for the per-case reports");
  demo_cmd->add_option("--format", demo.format, "format of the per-case reports")
      ->check(CLI::IsMember({"text", "csv", "json-like", "json"}));
  demo_cmd->add_option("--goldens", demo.goldens, "golden directory");
  demo_cmd->add_flag("--update-goldens", demo.update_goldens, "rewrite the goldens from this run");
  auto* demo_tol_opt = demo_cmd->add_option("--tol", demo_tol, "distance tolerance for the sampled-cone cases")
                           ->check(CLI::PositiveNumber);

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? 0 : kUsageError;
  }

  try {
    if (demo_cmd->parsed()) {
      if (demo_tol_opt->count()) demo.cone_tol = demo_tol;
      if (!demo_out.empty()) demo.out = demo_out;
      return run_demo(demo, out, err);
    }
    Params flags = f.params();
    if (order_opt->count()) flags.order = order;
    if (dir_opt->count()) flags.direction = direction;
    Outcome o;
    if (counter->parsed()) {
      o = cmd_counterexample(flags);
    } else {
      const ProblemFile pf = load_problem(f.problem);
      if (cone->parsed()) o = cmd_cone(pf, flags);
      else if (limit->parsed()) o = cmd_limit(pf, flags, sw);
      else if (haus->parsed()) o = cmd_hausdorff(pf, flags);
      else if (deriv->parsed()) o = cmd_deriv(pf, flags, sw);
      else if (reg->parsed()) o = cmd_regula(pf, flags, sw);
      else o = cmd_props(pf, flags);
    }
    out << render_text(o);
    if (!f.out.empty()) write_file(f.out, render(o, f.format));
    return exit_code(o.report.verdict);
  } catch (const InputError& e) {
    err << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::invalid_argument& e) {
    err << "input rejected: " << e.what() << "\n";
    return kInputError;
  } catch (const exprs::DomainError& e) {
    err << "input rejected: " << e.what() << "\n";
    return kInputError;
  } catch (const calculus::EvaluationError& e) {
    err << "input rejected: " << e.what() << "\n";
    return kInputError;
  } catch (const std::ios_base::failure& e) {
    err << "output error: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kInternalError;
  }
}

}  // namespace tangency::cli
