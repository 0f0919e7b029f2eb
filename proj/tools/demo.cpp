#include <fmt/format.h>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>

#include "commands.hpp"
#include "tangency/calculus.hpp"
#include "tangency/cones.hpp"

namespace tangency::cli {

namespace fs = std::filesystem;

namespace {

struct Case {
  std::string name;
  std::string expected;  // verdict label
  bool sampled_cone = false;
  std::function<Outcome(const Params& flags)> run;
};

ProblemFile problem(const std::string& name, const std::string& text) { return parse_problem(text, "demo:" + name); }

std::string geometric_sequence_json() {
  std::string pts = "[0]";
  for (int n = 0; n <= 60; ++n) pts += fmt::format(", [{:.17g}]", std::ldexp(1.0, -n));
  return fmt::format(R"J({{"dim": 1, "set": {{"type": "cloud", "points": [{}]}}, "point": [0]}})J", pts);
}

const char* kBall = R"J({"dim": 2, "set": {"type": "ball", "center": [0, 0], "radius": 1}, "point": [1, 0]})J";
const char* kBallSampled =
    R"J({"dim": 2, "set": {"type": "ball", "center": [0, 0], "radius": 1}, "point": [1, 0],
        "params": {"force_sampled": true}})J";
const char* kCusp = R"J({"dim": 2, "set": {"type": "patch", "map": ["x1", "abs(x1)"], "domain": [[-1, 1]]},
                        "point": [0, 0]})J";
const char* kSinInverse =
    R"J({"dim": 1, "set": {"type": "box", "domain": [[-1, 1]]}, "point": [0.37],
        "family": {"base": 8, "ratio": 2, "length": 18,
                   "set": {"type": "patch", "map": ["sin(1/x1)"], "domain": [["1/(lam + 20*pi)", "1/lam"]],
                           "grid": 4001}}})J";
const char* kShrinkingBalls =
    R"J({"dim": 2, "set": {"type": "ball", "center": [0, 0], "radius": 1},
        "family": {"set": {"type": "ball", "center": [0, 0], "radius": "1 + 1/lam"}}, "params": {"tol": 1e-3}})J";
const char* kAlternating =
    R"J({"dim": 1, "set": {"type": "cloud", "points": [[0]]},
        "family": {"members": [{"type": "cloud", "points": [[0]]}, {"type": "cloud", "points": [[1]]}]},
        "params": {"samples": 100}})J";
const char* kSquareMax =
    R"J({"dim": 2, "function": "x1 + x2", "set": {"type": "box", "domain": [[0, 1], [0, 1]]}, "point": [1, 1]})J";
const char* kSquareOrigin =
    R"J({"dim": 2, "function": "x1 + x2", "set": {"type": "box", "domain": [[0, 1], [0, 1]]}, "point": [0, 0]})J";
const char* kDisk = R"J({"dim": 2, "function": "x1", "set": {"type": "ball", "center": [0, 0], "radius": 1},
                        "point": [1, 0]})J";
const char* kAckerDickstein = R"J({"dim": 2, "function": "acker_dickstein", "point": [0, 0]})J";
const char* kPeanoSin = R"J({"dim": 1, "function": "sin", "point": [0], "params": {"order": 3}})J";
const char* kH2Sin = R"J({"dim": 1, "function": "h2sin", "point": [0]})J";
const char* kExp = R"J({"dim": 1, "function": "exp", "point": [0]})J";

double angle(const Vector& a, const Vector& b) {
  return std::acos(std::clamp(dot(a, b) / (a.norm() * b.norm()), -1.0, 1.0));
}

std::vector<Vector> generators(const ojson& cone) {
  std::vector<Vector> out;
  for (const auto& g : cone.at("generators")) out.emplace_back(g.get<std::vector<double>>());
  return out;
}

double nearest_angle(const std::vector<Vector>& gens, const Vector& v) {
  double best = INFINITY;
  for (const auto& g : gens) best = std::min(best, angle(g, v));
  return best;
}

// Unit ball at (1,0): the half-plane v1 <= 0.
void half_plane_checks(Outcome& o, const ProblemFile& pf, const Params& flags) {
  Params p = pf.params;
  Params f = flags;
  if (f.tol) f.distance_tol = f.tol;
  f.tol.reset();
  p.merge(f);
  cones::BlowUpParams b;
  b.force_sampled = p.force_sampled.value_or(false);
  if (p.distance_tol) b.distance_tol = *p.distance_tol;
  if (p.angular_tol) b.angular_tol = *p.angular_tol;
  const cones::Cone c = cones::upper_tangent_cone(*pf.set, *pf.point, b);
  bool members = true;
  for (const Vector& v : {Vector{0, 1}, Vector{0, -1}, Vector{-1, 0}}) members = members && cones::direction_member(c, v, b.angular_tol);
  const bool excluded = !cones::direction_member(c, Vector{1, 0}, b.angular_tol);
  double worst = -INFINITY;
  for (const auto& g : c.gens) worst = std::max(worst, g[0]);
  const Verdict v = c.inconclusive ? Verdict::Inconclusive
                                   : (members && excluded && worst <= std::sin(b.angular_tol) ? Verdict::Pass : Verdict::Fail);
  o.report.add_check("cone is the half-plane v1 <= 0", v,
                     fmt::format("(0,+-1), (-1,0) inside, (1,0) outside, max generator v1 = {:.3g}", worst));
  o.report.settle();
}

Outcome mean_value_case(const std::string& curve, double t, double h, int n) {
  Outcome o;
  o.command = "mean-value";
  o.header["command"] = "mean-value";
  o.header["curve"] = curve;
  o.header["t"] = t;
  o.header["h"] = h;
  o.header["n"] = n;
  o.header["samples"] = 2000;
  o.report = calculus::mean_value_certificate(Curve::builtin(curve), t, h, n);
  return o;
}

std::vector<Case> cases() {
  std::vector<Case> out;
  out.push_back({"unit-ball-cone", "PASS", false, [](const Params& fl) {
                   const ProblemFile pf = problem("unit-ball-cone", kBall);
                   Outcome o = cmd_cone(pf, fl);
                   half_plane_checks(o, pf, fl);
                   return o;
                 }});
  out.push_back({"unit-ball-cone-sampled", "PASS", true, [](const Params& fl) {
                   const ProblemFile pf = problem("unit-ball-cone-sampled", kBallSampled);
                   Outcome o = cmd_cone(pf, fl);
                   half_plane_checks(o, pf, fl);
                   return o;
                 }});
  out.push_back({"cusp-cone", "PASS", true, [](const Params& fl) {
                   Outcome o = cmd_cone(problem("cusp-cone", kCusp), fl);
                   const auto gens = generators(o.payload.at("upper"));
                   const double s = std::sqrt(0.5);
                   const double a = nearest_angle(gens, Vector{s, s}), b = nearest_angle(gens, Vector{-s, s});
                   double stray = 0.0;
                   for (const auto& g : gens)
                     stray = std::max(stray, std::min(angle(g, Vector{s, s}), angle(g, Vector{-s, s})));
                   const bool ok = a <= 1e-2 && b <= 1e-2 && stray <= 1e-2;
                   o.report.add_check("two rays (1,1)/sqrt2 and (-1,1)/sqrt2",
                                      o.payload.at("upper").at("inconclusive").get<bool>()
                                          ? Verdict::Inconclusive
                                          : (ok ? Verdict::Pass : Verdict::Fail),
                                      fmt::format("angular errors {:.3g}, {:.3g}; farthest generator {:.3g}", a, b, stray));
                   o.report.settle();
                   return o;
                 }});
  out.push_back({"geometric-sequence-cones", "PASS", false, [](const Params& fl) {
                   Outcome o = cmd_cone(problem("geometric-sequence", geometric_sequence_json()), fl);
                   const auto up = generators(o.payload.at("upper"));
                   const auto lo = generators(o.payload.at("lower"));
                   const bool ray = nearest_angle(up, Vector{1.0}) <= 1e-2;
                   const bool apex = lo.empty() && o.payload.at("lower").at("kind") == "apex";
                   o.report.add_check("strict inclusion: lower cone {0}, upper cone the ray [0, inf)",
                                      ray && apex ? Verdict::Pass : Verdict::Fail,
                                      fmt::format("lower is {}, upper has {} generator(s)",
                                                  o.payload.at("lower").at("kind").get<std::string>(), up.size()));
                   o.report.settle();
                   return o;
                 }});
  out.push_back({"sin-inverse-adherence", "PASS", false, [](const Params& fl) {
                   const ProblemFile pf = problem("sin-inverse-adherence", kSinInverse);
                   Outcome o = cmd_hausdorff(pf, fl);
                   for (double y : {0.37, -1.0, 1.2}) {
                     ProblemFile q = pf;
                     q.point = Point{y};
                     Switches sw;
                     sw.rule = "upper";
                     const Outcome l = cmd_limit(q, fl, sw);
                     const bool member = l.payload.at("member").get<bool>();
                     const bool want = std::abs(y) <= 1.0;
                     o.report.add_check(fmt::format("{} {} the upper limit", y, want ? "in" : "not in"),
                                        l.report.verdict == Verdict::Inconclusive
                                            ? Verdict::Inconclusive
                                            : (member == want ? Verdict::Pass : Verdict::Fail),
                                        fmt::format("tail min distance {:.3g}", l.report.value("tail_value")));
                   }
                   o.report.settle();
                   return o;
                 }});
  out.push_back({"shrinking-balls-sandwich", "PASS", false, [](const Params& fl) {
                   Switches sw;
                   sw.rule = "sandwich";
                   return cmd_limit(problem("shrinking-balls", kShrinkingBalls), fl, sw);
                 }});
  out.push_back({"alternating-sandwich", "FAIL", false, [](const Params& fl) {
                   Switches sw;
                   sw.rule = "sandwich";
                   Outcome o = cmd_limit(problem("alternating", kAlternating), fl, sw);
                   if (!o.report.witness_points.empty()) o.report.set_value("witness", o.report.witness_points.front()[0]);
                   return o;
                 }});
  out.push_back({"regula-square-corner", "SATISFIED", false, [](const Params& fl) {
                   return cmd_regula(problem("square-max", kSquareMax), fl, Switches{"max", "", ""});
                 }});
  out.push_back({"regula-square-origin", "VIOLATED", false, [](const Params& fl) {
                   return cmd_regula(problem("square-origin", kSquareOrigin), fl, Switches{"max", "", ""});
                 }});
  out.push_back({"regula-disk", "SATISFIED", false, [](const Params& fl) {
                   return cmd_regula(problem("disk", kDisk), fl, Switches{"max", "", ""});
                 }});
  out.push_back({"chain-rule-counterexample", "PASS", false, [](const Params& fl) { return cmd_counterexample(fl); }});
  out.push_back({"mean-value-circle", "PASS", false, [](const Params&) { return mean_value_case("circle", 0.0, 0.5, 0); }});
  out.push_back({"mean-value-poly23", "PASS", false, [](const Params&) { return mean_value_case("poly23", 0.0, 1.0, 1); }});
  out.push_back({"peano-sin-order-3", "PASS", false, [](const Params& fl) {
                   return cmd_deriv(problem("peano-sin", kPeanoSin), fl, Switches{"", "", "peano"});
                 }});
  out.push_back({"strict-h2sin", "FAIL", false, [](const Params& fl) {
                   return cmd_deriv(problem("h2sin", kH2Sin), fl, Switches{"", "", "strict"});
                 }});
  out.push_back({"strict-exp", "PASS", false, [](const Params& fl) {
                   return cmd_deriv(problem("exp", kExp), fl, Switches{"", "", "strict"});
                 }});
  out.push_back({"frechet-acker-dickstein", "FAIL", false, [](const Params& fl) {
                   return cmd_deriv(problem("acker-dickstein", kAckerDickstein), fl, Switches{"", "", "frechet"});
                 }});
  out.push_back({"props-ball-boundary", "PASS", false,
                 [](const Params& fl) { return cmd_props(problem("ball-boundary", kBall), fl); }});
  return out;
}

// Verdicts and check lists must match; values agree to 1e-6 relative.
std::string golden_mismatch(const ojson& got, const ojson& gold) {
  if (got.at("verdict") != gold.at("verdict"))
    return fmt::format("verdict {} vs golden {}", got.at("verdict").get<std::string>(), gold.at("verdict").get<std::string>());
  const ojson& gc = got.at("report").at("checks");
  const ojson& dc = gold.at("report").at("checks");
  if (gc.size() != dc.size()) return fmt::format("{} checks vs golden {}", gc.size(), dc.size());
  for (std::size_t i = 0; i < gc.size(); ++i)
    if (gc[i].at("name") != dc[i].at("name") || gc[i].at("verdict") != dc[i].at("verdict"))
      return fmt::format("check '{}' is {} vs golden '{}' {}", gc[i].at("name").get<std::string>(),
                         gc[i].at("verdict").get<std::string>(), dc[i].at("name").get<std::string>(),
                         dc[i].at("verdict").get<std::string>());
  const ojson& gv = got.at("report").at("values");
  const ojson& dv = gold.at("report").at("values");
  for (const auto& [k, v] : dv.items()) {
    if (!gv.contains(k)) return fmt::format("value {} missing", k);
    if (v.is_null() || gv.at(k).is_null()) {
      if (v.is_null() != gv.at(k).is_null()) return fmt::format("value {} changed finiteness", k);
      continue;
    }
    const double a = gv.at(k).get<double>(), b = v.get<double>();
    if (!(std::abs(a - b) <= 1e-6 * (1.0 + std::abs(b)))) return fmt::format("value {} = {:.17g} vs golden {:.17g}", k, a, b);
  }
  return {};
}

std::string extension(const std::string& format) {
  if (format == "csv") return ".csv";
  if (format == "text") return ".txt";
  return ".json";
}

}  // namespace

int run_demo(const DemoOptions& opt, std::ostream& out, std::ostream& err) {
  using clock = std::chrono::steady_clock;
  const auto start = clock::now();
  if (opt.out) fs::create_directories(*opt.out);
  if (opt.update_goldens) fs::create_directories(opt.goldens);
  Verdict overall = Verdict::Pass;
  std::string summary = "case,expected,verdict,status\n";
  out << fmt::format("demo: goldens in {}\n", opt.goldens);
  if (opt.cone_tol) out << fmt::format("demo: sampled-cone distance tolerance overridden to {:g}\n", *opt.cone_tol);
  for (const Case& c : cases()) {
    const auto t0 = clock::now();
    Params flags;
    if (c.sampled_cone && opt.cone_tol) flags.tol = *opt.cone_tol;
    std::string status;
    Verdict cv;
    std::string got_label = "ERROR", note;
    try {
      const Outcome o = c.run(flags);
      got_label = verdict_label(o);
      const std::string machine = render_json(o);
      if (opt.out) {
        std::ofstream f(fs::path(*opt.out) / (c.name + extension(opt.format)), std::ios::binary);
        f << render(o, opt.format);
      }
      const fs::path golden = fs::path(opt.goldens) / (c.name + ".json");
      if (o.report.verdict == Verdict::Inconclusive) {
        cv = Verdict::Inconclusive;
        note = o.report.message;
      } else if (got_label != c.expected) {
        cv = Verdict::Fail;
        note = fmt::format("expected {}", c.expected);
      } else if (opt.update_goldens) {
        std::ofstream(golden, std::ios::binary) << machine;
        cv = Verdict::Pass;
        note = "golden written";
      } else {
        std::ifstream in(golden, std::ios::binary);
        if (!in) {
          cv = Verdict::Fail;
          note = "golden missing: " + golden.string();
        } else {
          std::stringstream ss;
          ss << in.rdbuf();
          note = golden_mismatch(ojson::parse(machine), ojson::parse(ss.str()));
          cv = note.empty() ? Verdict::Pass : Verdict::Fail;
        }
      }
    } catch (const std::exception& e) {
      cv = Verdict::Fail;
      note = e.what();
    }
    overall = combine(overall, cv);
    status = to_string(cv);
    const double secs = std::chrono::duration<double>(clock::now() - t0).count();
    out << fmt::format("{:<12} {:<28} got {:<10} expected {:<10} {:6.2f} s{}\n", status, c.name, got_label, c.expected,
                       secs, note.empty() ? "" : "  (" + note + ")");
    summary += fmt::format("{},{},{},{}\n", c.name, c.expected, got_label, status);
  }
  if (opt.out) std::ofstream(fs::path(*opt.out) / "summary.csv", std::ios::binary) << summary;
  const double total = std::chrono::duration<double>(clock::now() - start).count();
  out << fmt::format("demo: {} in {:.1f} s\n", to_string(overall), total);
  if (overall != Verdict::Pass) err << "demo: " << to_string(overall) << "\n";
  return exit_code(overall);
}

}  // namespace tangency::cli
