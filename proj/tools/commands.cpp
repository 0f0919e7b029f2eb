#include "commands.hpp"

#include <fmt/format.h>
#include <fmt/ranges.h>

#include <cmath>
#include <numbers>

#include "tangency/calculus.hpp"
#include "tangency/cones.hpp"
#include "tangency/regula.hpp"
#include "tangency/setlimits.hpp"

namespace tangency::cli {

using sets::SetRep;
using setlimits::Schedule;

namespace {

ojson coords(const std::vector<double>& v) {
  ojson a = ojson::array();
  for (double c : v) a.push_back(c + 0.0);
  return a;
}
ojson coords(const Point& p) { return coords(p.data()); }
ojson coords(const Vector& v) { return coords(v.data()); }

ojson vectors(const std::vector<Vector>& vs) {
  ojson a = ojson::array();
  for (const auto& v : vs) a.push_back(coords(v));
  return a;
}

std::string short_num(double v) { return fmt::format("{:.6g}", v); }

std::string short_coords(const std::vector<double>& v) {
  std::vector<std::string> parts;
  for (double c : v) parts.push_back(short_num(c));
  return fmt::format("({})", fmt::join(parts, ", "));
}

Params merged(const ProblemFile& pf, const Params& flags) {
  Params p = pf.params;
  p.merge(flags);
  return p;
}

ojson base_header(const std::string& cmd, const ProblemFile& pf) {
  ojson h;
  h["command"] = cmd;
  h["problem"] = pf.path;
  h["dim"] = pf.dim;
  if (pf.function_text) h["function"] = *pf.function_text;
  if (pf.set) h["set"] = pf.set->kind();
  if (pf.other_set) h["other_set"] = pf.other_set->kind();
  if (pf.point) h["point"] = coords(*pf.point);
  return h;
}

ojson schedule_json(const Schedule& s) {
  ojson j;
  j["length"] = s.size();
  j["first"] = s.lambdas.front();
  j["last"] = s.lambdas.back();
  j["ratio"] = s.size() > 1 ? s.lambdas[1] / s.lambdas[0] : 1.0;
  j["tail_begin"] = s.tail_begin();
  return j;
}

const SetRep& need_set(const ProblemFile& pf, const char* cmd) {
  if (!pf.set) throw InputError(fmt::format("{}: key set: missing (required by {})", pf.path, cmd));
  return *pf.set;
}
const Point& need_point(const ProblemFile& pf, const char* cmd) {
  if (!pf.point) throw InputError(fmt::format("{}: key point: missing (required by {})", pf.path, cmd));
  return *pf.point;
}
const ScalarField& need_function(const ProblemFile& pf, const char* cmd) {
  if (!pf.function) throw InputError(fmt::format("{}: key function: missing (required by {})", pf.path, cmd));
  return *pf.function;
}

// Blow-up settings: schedule 2^(3 + j/2) unless overridden. For cone-valued
// commands --tol is the distance tolerance tau0.
cones::BlowUpParams blowup(const ProblemFile& pf, Params flags, bool tol_is_distance, ojson& header) {
  Params p = pf.params;
  if (tol_is_distance) {
    if (p.tol && !p.distance_tol) p.distance_tol = p.tol;
    if (flags.tol) flags.distance_tol = flags.tol;
    p.tol.reset();
    flags.tol.reset();
  }
  p.merge(flags);
  cones::BlowUpParams b;
  if (p.schedule_base || p.schedule_ratio || p.schedule_len)
    b.schedule = Schedule::geometric(p.schedule_base.value_or(8.0), p.schedule_ratio.value_or(std::numbers::sqrt2),
                                     p.schedule_len.value_or(35));
  if (p.angular_tol) b.angular_tol = *p.angular_tol;
  if (p.distance_tol) b.distance_tol = *p.distance_tol;
  if (p.curvature_slack) b.curvature_slack = *p.curvature_slack;
  if (p.samples) b.samples_per_scale = *p.samples;
  b.force_sampled = p.force_sampled.value_or(false);
  b.validate();
  ojson& params = header["params"];
  params["angular_tol"] = b.angular_tol;
  params["distance_tol"] = b.distance_tol;
  params["curvature_slack"] = b.curvature_slack;
  params["samples_per_scale"] = b.grid_size(pf.dim);
  params["federer_eps"] = {{"first", 0.125}, {"last", std::ldexp(1.0, -20)}, {"count", 18}};
  params["force_sampled"] = b.force_sampled;
  header["schedule"] = schedule_json(b.schedule);
  return b;
}

// Limit schedule: 2^j, j = 3..20, unless the family or the flags say otherwise.
Schedule limit_schedule(const Family& fam, const Params& p) {
  if (fam.schedule && !p.schedule_base && !p.schedule_ratio && !p.schedule_len) return *fam.schedule;
  const double base = p.schedule_base.value_or(fam.base.value_or(8.0));
  const double ratio = p.schedule_ratio.value_or(fam.ratio.value_or(2.0));
  const std::size_t len = p.schedule_len.value_or(fam.length.value_or(18));
  Schedule s = Schedule::geometric(base, ratio, len);
  s.validate();
  return s;
}

// 1e-6 for exact oracles, otherwise 10x the largest reported bound at the probe.
double default_limit_tol(const setlimits::SetFamily& f, const Point& probe) {
  double bound = 0.0;
  for (std::size_t j = 0; j < f.size(); ++j) bound = std::max(bound, sets::distance_to_set(probe, f.at(j)).bound);
  return std::max(1e-6, 10.0 * bound);
}

ojson cone_json(const cones::Cone& c) {
  ojson j;
  j["kind"] = cones::to_string(c.kind);
  j["full_space"] = c.full_space;
  j["inconclusive"] = c.inconclusive;
  j["generators"] = vectors(c.gens);
  if (c.exact()) {
    ojson pieces = ojson::array();
    for (const auto& piece : c.pieces) pieces.push_back(vectors(piece.normals));
    j["inequalities"] = pieces;
  } else {
    j["angular_resolution"] = c.angular_res;
  }
  if (!c.note.empty()) j["note"] = c.note;
  return j;
}

// Ray table row: components, then first/last scale observed (blank for exact rays).
void add_ray_rows(Outcome& o, const std::string& label, const cones::Cone& c) {
  for (std::size_t i = 0; i < c.gens.size(); ++i) {
    std::vector<std::string> row{label, std::to_string(i)};
    for (double v : c.gens[i].data()) row.push_back(csv_number(v));
    const bool scaled = i < c.scales.size();
    row.push_back(scaled ? csv_number(c.scales[i].first) : "");
    row.push_back(scaled ? csv_number(c.scales[i].last) : "");
    o.csv_rows.push_back(std::move(row));
  }
}

std::vector<std::string> component_columns(std::size_t dim, const std::string& stem) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < dim; ++i) out.push_back(fmt::format("{}{}", stem, i + 1));
  return out;
}

std::string text_json(const ojson& j) {
  if (j.is_array() && j.size() > 8) {
    ojson head = ojson::array();
    for (std::size_t i = 0; i < 8; ++i) head.push_back(j[i]);
    std::string s = head.dump();
    s.pop_back();
    return fmt::format("{}, ...] ({} entries)", s, j.size());
  }
  if (j.is_number_float()) return short_num(j.get<double>());
  if (j.is_string()) return j.get<std::string>();
  return j.dump();
}

}  // namespace

std::string csv_number(double v) { return fmt::format("{}", v + 0.0); }

ojson report_json(const Report& r) {
  ojson j;
  j["title"] = r.title;
  j["verdict"] = to_string(r.verdict);
  j["message"] = r.message;
  ojson checks = ojson::array();
  for (const auto& c : r.checks) checks.push_back({{"name", c.name}, {"verdict", to_string(c.verdict)}, {"detail", c.detail}});
  j["checks"] = checks;
  ojson values = ojson::object();
  for (const auto& [k, v] : r.values) values[k] = v;
  j["values"] = values;
  ojson tols = ojson::object();
  for (const auto& [k, v] : r.tolerances) tols[k] = v;
  j["tolerances"] = tols;
  ojson wp = ojson::array();
  for (const auto& p : r.witness_points) wp.push_back(coords(p));
  j["witness_points"] = wp;
  j["witness_directions"] = vectors(r.witness_directions);
  return j;
}

std::string verdict_label(const Outcome& o) {
  return o.regula_labels ? regula::label(o.report.verdict) : to_string(o.report.verdict);
}

std::string render_text(const Outcome& o) {
  std::string s;
  for (const auto& [k, v] : o.header.items()) {
    if (v.is_object()) {
      s += k + ":\n";
      for (const auto& [k2, v2] : v.items()) s += fmt::format("  {} = {}\n", k2, text_json(v2));
    } else {
      s += fmt::format("{}: {}\n", k, text_json(v));
    }
  }
  s += fmt::format("report: {}\n", o.report.title);
  for (const auto& c : o.report.checks)
    s += fmt::format("  {:<12} {}{}\n", o.regula_labels ? regula::label(c.verdict) : to_string(c.verdict), c.name,
                     c.detail.empty() ? "" : ": " + c.detail);
  if (!o.report.values.empty()) {
    s += "values:\n";
    for (const auto& [k, v] : o.report.values) s += fmt::format("  {} = {}\n", k, short_num(v));
  }
  if (!o.report.tolerances.empty()) {
    s += "tolerances:\n";
    for (const auto& [k, v] : o.report.tolerances) s += fmt::format("  {} = {}\n", k, short_num(v));
  }
  for (const auto& p : o.report.witness_points) s += fmt::format("witness point: {}\n", short_coords(p.data()));
  for (const auto& v : o.report.witness_directions) s += fmt::format("witness direction: {}\n", short_coords(v.data()));
  for (const auto& [k, v] : o.payload.items()) {
    if (v.is_object()) {
      s += k + ":\n";
      for (const auto& [k2, v2] : v.items()) s += fmt::format("  {} = {}\n", k2, text_json(v2));
    } else {
      s += fmt::format("{}: {}\n", k, text_json(v));
    }
  }
  if (!o.report.message.empty()) s += fmt::format("message: {}\n", o.report.message);
  s += fmt::format("verdict: {}\n", verdict_label(o));
  return s;
}

std::string render_csv(const Outcome& o) {
  std::string s = fmt::format("{}\n", fmt::join(o.csv_columns, ","));
  for (const auto& row : o.csv_rows) s += fmt::format("{}\n", fmt::join(row, ","));
  return s;
}

std::string render_json(const Outcome& o) {
  ojson j;
  j["header"] = o.header;
  j["verdict"] = verdict_label(o);
  j["report"] = report_json(o.report);
  j["result"] = o.payload;
  return j.dump(2) + "\n";
}

std::string render(const Outcome& o, const std::string& format) {
  if (format == "csv") return render_csv(o);
  if (format == "json-like" || format == "json") return render_json(o);
  return render_text(o);
}

Outcome cmd_cone(const ProblemFile& pf, const Params& flags) {
  Outcome o;
  o.command = "cone";
  o.header = base_header("cone", pf);
  const SetRep& a = need_set(pf, "cone");
  const Point& x = need_point(pf, "cone");
  const cones::BlowUpParams p = blowup(pf, flags, true, o.header);
  const cones::Cone up = cones::upper_tangent_cone(a, x, p);
  const cones::Cone lo = cones::lower_tangent_cone(a, x, p);
  const cones::Cone tan = cones::federer_cone(a, x, p);
  const cones::Contingent k = cones::contingent_directions(a, x, p);
  o.report = cones::formulation_check(up, lo, tan, k, p);
  o.report.title = "tangent cones";
  if (up.inconclusive)
    o.report.add_check("upper cone resolved", Verdict::Inconclusive, up.note.empty() ? "oracle bounds exceed distance_tol" : up.note);
  o.report.settle();
  o.payload["upper"] = cone_json(up);
  o.payload["lower"] = cone_json(lo);
  o.payload["federer"] = cone_json(tan);
  o.payload["contingent"] = {{"accumulation", k.accumulation},
                             {"inconclusive", k.inconclusive},
                             {"directions", vectors(k.directions)}};
  o.csv_columns = {"cone", "index"};
  for (auto& c : component_columns(pf.dim, "v")) o.csv_columns.push_back(c);
  o.csv_columns.push_back("first_scale");
  o.csv_columns.push_back("last_scale");
  add_ray_rows(o, "upper", up);
  add_ray_rows(o, "lower", lo);
  add_ray_rows(o, "federer", tan);
  for (std::size_t i = 0; i < k.directions.size(); ++i) {
    std::vector<std::string> row{"contingent", std::to_string(i)};
    for (double v : k.directions[i].data()) row.push_back(csv_number(v));
    row.insert(row.end(), {"", ""});
    o.csv_rows.push_back(std::move(row));
  }
  return o;
}

Outcome cmd_limit(const ProblemFile& pf, const Params& flags, const Switches& sw) {
  Outcome o;
  o.command = "limit";
  o.header = base_header("limit", pf);
  if (!pf.family) throw InputError(fmt::format("{}: key family: missing (required by limit)", pf.path));
  const Params p = merged(pf, flags);
  const Schedule s = limit_schedule(*pf.family, p);
  const setlimits::SetFamily fam = pf.family->build(s, pf.dim);
  std::string rule = sw.rule.empty() ? (pf.set ? "sandwich" : "upper") : sw.rule;
  o.header["rule"] = rule;
  o.header["schedule"] = schedule_json(s);
  o.csv_columns = {"lambda", "distance"};

  if (rule == "sandwich") {
    const SetRep& a = need_set(pf, "limit --rule sandwich");
    const std::size_t density = p.samples.value_or(200);
    const std::uint64_t seed = p.seed.value_or(1);
    const auto probe = sets::sample(a, 1, seed);
    const double tol = p.tol.value_or(probe.empty() ? 1e-6 : default_limit_tol(fam, probe.front()));
    o.header["params"] = {{"tol", tol}, {"samples", density}, {"seed", seed}};
    o.report = setlimits::convergence_check(fam, a, tol, density, seed);
    // Per-member Hausdorff distance to A, when both are bounded.
    bool bounded = a.bounded();
    for (std::size_t j = 0; j < fam.size() && bounded; ++j) bounded = fam.at(j).bounded();
    if (bounded && !a.is_empty())
      for (std::size_t j = 0; j < fam.size(); ++j)
        if (!fam.at(j).is_empty())
          o.csv_rows.push_back({csv_number(s.lambdas[j]),
                                csv_number(setlimits::hausdorff_distance(fam.at(j), a, density, seed))});
    return o;
  }
  if (rule != "lower" && rule != "upper")
    throw InputError(fmt::format("limit: unknown rule '{}' (expected lower, upper or sandwich)", rule));
  const Point& y = need_point(pf, "limit");
  const double tol = p.tol.value_or(default_limit_tol(fam, y));
  o.header["params"] = {{"tol", tol}};
  const setlimits::LimitVerdict v =
      rule == "lower" ? setlimits::lower_limit_member(y, fam, tol) : setlimits::upper_limit_member(y, fam, tol);
  o.report.title = rule == "lower" ? "lower limit membership" : "upper limit membership";
  o.report.add_check(fmt::format("y in the {} limit", rule), v.verdict,
                     fmt::format("tail {} of d(y, A_lambda) = {}", v.rule == setlimits::LimitRule::Lim ? "max" : "min",
                                 short_num(v.tail_value)));
  o.report.settle();
  o.report.set_value("tail_value", v.tail_value);
  o.report.tolerances = {{"tol", tol}};
  o.payload["member"] = v.member;
  o.payload["limit_rule"] = setlimits::to_string(v.rule);
  for (const auto& t : v.trace) o.csv_rows.push_back({csv_number(t.lambda), csv_number(t.distance)});
  ojson trace = ojson::array();
  for (const auto& t : v.trace) trace.push_back({t.lambda, t.distance, t.bound});
  o.payload["trace"] = trace;
  return o;
}

Outcome cmd_hausdorff(const ProblemFile& pf, const Params& flags) {
  Outcome o;
  o.command = "hausdorff";
  o.header = base_header("hausdorff", pf);
  const Params p = merged(pf, flags);
  const std::size_t density = p.samples.value_or(200);
  const std::uint64_t seed = p.seed.value_or(1);
  const double tol = p.tol.value_or(1e-2);
  const SetRep& a = need_set(pf, "hausdorff");
  std::optional<SetRep> b = pf.other_set;
  o.report.title = "Hausdorff distance";
  if (!b) {
    if (!pf.family)
      throw InputError(fmt::format("{}: key other_set: missing (hausdorff needs other_set or family)", pf.path));
    // Upper-limit surrogate of the family against the set.
    const Schedule s = limit_schedule(*pf.family, p);
    const setlimits::SetFamily fam = pf.family->build(s, pf.dim);
    std::vector<SetRep> seq;
    for (std::size_t j = 0; j < fam.size(); ++j) seq.push_back(fam.at(j));
    const auto probe = sets::sample(a, 1, seed);
    const double ls_tol = probe.empty() ? 1e-6 : default_limit_tol(fam, probe.front());
    b = setlimits::ls_countable(seq, ls_tol, density, seed);
    o.header["schedule"] = schedule_json(s);
    o.header["params"]["ls_tol"] = ls_tol;
    o.report.title = "Hausdorff distance of the sampled upper limit";
  }
  o.header["params"]["tol"] = tol;
  o.header["params"]["samples"] = density;
  o.header["params"]["seed"] = seed;
  const double d = setlimits::hausdorff_distance(a, *b, density, seed);
  o.report.add_check("Hausdorff distance within tol", d <= tol ? Verdict::Pass : Verdict::Fail,
                     fmt::format("{} vs tol {}", short_num(d), short_num(tol)));
  o.report.set_value("distance", d);
  o.report.tolerances = {{"tol", tol}};
  o.report.settle();
  o.csv_columns = {"samples", "seed", "distance"};
  o.csv_rows.push_back({std::to_string(density), std::to_string(seed), csv_number(d)});
  return o;
}

Outcome cmd_deriv(const ProblemFile& pf, const Params& flags, const Switches& sw) {
  Outcome o;
  o.command = "deriv";
  o.header = base_header("deriv", pf);
  o.header["kind"] = sw.kind;
  const ScalarField& f = need_function(pf, "deriv");
  const Point& x = need_point(pf, "deriv");
  const Params p = merged(pf, flags);
  o.csv_columns = {"radius", "residual"};
  auto scalar_point = [&]() {
    if (pf.dim != 1) throw InputError(fmt::format("{}: key dim: deriv --kind {} needs dim 1", pf.path, sw.kind));
    return x[0];
  };

  if (sw.kind == "frechet") {
    const double tol = p.tol.value_or(1e-4);
    const std::size_t dirs = p.samples.value_or(64);
    const auto analytic = f.analytic_gradient(x);
    const Vector df = analytic ? *analytic : calculus::estimate_gradient(f, x);
    const auto radii = calculus::default_radii();
    o.header["params"] = {{"tol", tol}, {"directions", dirs}, {"radii", coords(radii)}};
    const calculus::DiffReport d = calculus::check_frechet(f, df, x, radii, tol, dirs);
    o.report.title = "Frechet differentiability";
    o.report.add_check("residual shrinks below tol", d.verdict, d.message);
    o.report.settle();
    if (!d.curve.empty()) o.report.set_value("final_residual", d.curve.back().residual);
    o.report.tolerances = {{"tol", tol}};
    if (d.witness) o.report.witness_directions.push_back(d.witness->direction);
    o.payload["gradient"] = coords(df);
    o.payload["gradient_source"] = analytic ? "analytic" : "finite differences";
    for (const auto& c : d.curve) o.csv_rows.push_back({csv_number(c.radius), csv_number(c.residual)});
    return o;
  }
  if (sw.kind == "peano") {
    const double t = scalar_point();
    const int n = p.order.value_or(1);
    o.header["params"] = {{"order", n}, {"residual_tol", 1e-3}};
    o.report.title = fmt::format("Peano derivative of order {}", n);
    try {
      const calculus::PeanoResult r = calculus::peano_derivative(f, t, n);
      o.report.add_check("polynomial fit residual within tol", Verdict::Pass,
                         fmt::format("residual {} at scale {}", short_num(r.residual), short_num(r.smallest_scale)));
      o.report.set_value("value", r.value);
      o.report.set_value("residual", r.residual);
      o.payload["coefficients"] = coords(r.coeffs);
      o.csv_rows.push_back({csv_number(r.smallest_scale), csv_number(r.residual)});
    } catch (const calculus::NoPeanoDerivative& err) {
      o.report.add_check("polynomial fit residual within tol", Verdict::Fail, err.what());
    }
    o.report.tolerances = {{"residual_tol", 1e-3}};
    o.report.settle();
    return o;
  }
  if (sw.kind == "strict") {
    const double t = scalar_point();
    const double tol = p.tol.value_or(1e-3);
    const std::uint64_t seed = p.seed.value_or(1);
    o.header["params"] = {{"tol", tol}, {"seed", seed}};
    o.report = calculus::strict_derivative_check(f, t, tol, seed);
    for (const auto& [k, v] : o.report.values)
      if (k.rfind("deviation@2^-", 0) == 0)
        o.csv_rows.push_back({csv_number(std::ldexp(1.0, -std::stoi(k.substr(13)))), csv_number(v)});
    return o;
  }
  if (sw.kind == "directional") {
    Vector v(pf.dim);
    if (p.direction) {
      if (p.direction->size() != pf.dim)
        throw InputError(fmt::format("{}: key params.direction: expected {} entries", pf.path, pf.dim));
      v = Vector(*p.direction);
    } else {
      v[0] = 1.0;
    }
    o.header["params"] = {{"direction", coords(v)}};
    o.report.title = "directional differential";
    try {
      const calculus::Directional d = calculus::directional_differential(f, x, v);
      o.report.add_check("two-sided limit exists", d.two_sided ? Verdict::Pass : Verdict::Fail,
                         fmt::format("forward {}, backward {}", short_num(d.forward), short_num(d.backward)));
      o.report.set_value("forward", d.forward);
      o.report.set_value("backward", d.backward);
      if (d.two_sided) o.report.set_value("value", d.value);
      for (const auto& [q, quot] : d.trace)
        o.csv_rows.push_back({csv_number(q), csv_number(quot - (q > 0 ? d.forward : d.backward))});
    } catch (const calculus::NonConvergent& err) {
      o.report.add_check("two-sided limit exists", Verdict::Fail, err.what());
    }
    o.report.settle();
    return o;
  }
  throw InputError(fmt::format("deriv: unknown kind '{}' (expected frechet, peano, strict or directional)", sw.kind));
}

Outcome cmd_regula(const ProblemFile& pf, const Params& flags, const Switches& sw) {
  Outcome o;
  o.command = "regula";
  o.regula_labels = true;
  o.header = base_header("regula", pf);
  const ScalarField& f = need_function(pf, "regula");
  const SetRep& a = need_set(pf, "regula");
  const Point& x = need_point(pf, "regula");
  const Params p = merged(pf, flags);
  const std::string mode_text = !sw.mode.empty() ? sw.mode : p.mode.value_or("max");
  const regula::Mode mode = regula::parse_mode(mode_text);
  o.header["mode"] = mode_text;
  const cones::BlowUpParams b = blowup(pf, flags, false, o.header);
  const regula::RegulaCertificate c = regula::check_regula(f, a, x, mode, b, p.tol);
  o.header["params"]["slack"] = c.slack;
  o.report = c.to_report();

  ojson cert;
  cert["mode"] = regula::to_string(c.mode);
  cert["point"] = coords(c.point);
  cert["gradient"] = coords(c.gradient);
  cert["cone_generators"] = vectors(c.cone.gens);
  cert["worst_direction"] = coords(c.worst_direction);
  cert["worst_value"] = c.worst_value;
  cert["verdict"] = regula::label(c.verdict);
  cert["tolerances"] = {{"slack", c.slack},
                        {"angular_tol", b.angular_tol},
                        {"distance_tol", b.distance_tol},
                        {"curvature_slack", b.curvature_slack}};
  o.payload["certificate"] = cert;

  o.csv_columns = {"index"};
  for (auto& col : component_columns(pf.dim, "g")) o.csv_columns.push_back(col);
  o.csv_columns.push_back("inner_product");
  for (std::size_t i = 0; i < c.cone.gens.size(); ++i) {
    std::vector<std::string> row{std::to_string(i)};
    for (double v : c.cone.gens[i].data()) row.push_back(csv_number(v));
    row.push_back(csv_number(dot(c.gradient, c.cone.gens[i])));
    o.csv_rows.push_back(std::move(row));
  }
  return o;
}

Outcome cmd_props(const ProblemFile& pf, const Params& flags) {
  Outcome o;
  o.command = "props";
  o.header = base_header("props", pf);
  const SetRep& a = need_set(pf, "props");
  const Point& x = need_point(pf, "props");
  const cones::BlowUpParams b = blowup(pf, flags, true, o.header);
  if (!pf.other_set) o.header["other_set"] = "default: A union ball(x + e1/2, 1/2)";
  o.report = cones::cone_property_suite(a, x, pf.other_set, b);
  o.csv_columns = {"property", "verdict", "detail"};
  for (const auto& c : o.report.checks) {
    std::string detail = c.detail;
    std::replace(detail.begin(), detail.end(), ',', ';');
    o.csv_rows.push_back({c.name, to_string(c.verdict), detail});
  }
  return o;
}

Outcome cmd_counterexample(const Params&) {
  Outcome o;
  o.command = "counterexample";
  o.header["command"] = "counterexample";
  o.header["f"] = "x1^3 x2 / (x1^4 + x2^2), f(0) = 0";
  o.header["g"] = "(x1, x2^2)";
  o.report = calculus::chain_rule_counterexample();
  o.csv_columns = {"direction_x", "direction_y", "composite", "chain_rule", "discrepancy"};
  std::vector<Vector> dirs{Vector{1, 0}, Vector{0, 1}, Vector{1, 1}};
  for (int k = 1; k < 24; ++k) {
    if (k == 6) continue;
    const double th = k * std::numbers::pi / 12;
    dirs.push_back(Vector{std::cos(th), std::sin(th)});
  }
  ojson rows = ojson::array();
  for (const auto& v : dirs) {
    const calculus::ChainRuleRow r = calculus::chain_rule_row(v);
    o.csv_rows.push_back(
        {csv_number(v[0]), csv_number(v[1]), csv_number(r.composite), csv_number(r.chain_rule), csv_number(r.discrepancy)});
    rows.push_back({v[0], v[1], r.composite, r.chain_rule, r.discrepancy});
  }
  o.payload["sweep"] = rows;
  return o;
}

}  // namespace tangency::cli
