#include "problem.hpp"

#include <fmt/format.h>

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

namespace tangency::cli {

using nlohmann::json;
using sets::SetRep;

namespace {

struct SchemaError {
  std::string key;
  std::string message;
};

[[noreturn]] void fail(const std::string& key, const std::string& msg) { throw SchemaError{key, msg}; }

void allow_keys(const json& j, const std::string& key, const std::set<std::string>& allowed) {
  if (!j.is_object()) fail(key, "expected an object");
  for (const auto& [k, v] : j.items())
    if (!allowed.count(k)) fail(key.empty() ? k : key + "." + k, "unknown key");
}

const json& need(const json& j, const std::string& key, const std::string& name) {
  if (!j.contains(name)) fail(key, "missing key '" + name + "'");
  return j.at(name);
}

double number(const json& j, const std::string& key, std::optional<double> lam) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    // lam and pi are passed as the two variables of a small expression.
    try {
      const exprs::Expr e = exprs::parse(j.get<std::string>(), 2, {{"lam", 1}, {"pi", 2}});
      const double v = e.eval(std::vector<double>{lam.value_or(NAN), std::numbers::pi});
      if (!std::isfinite(v)) fail(key, lam ? "expression is not finite at this lam" : "expression uses lam outside a family");
      return v;
    } catch (const exprs::ParseError& err) {
      fail(key, fmt::format("bad expression: {}", err.what()));
    }
  }
  fail(key, "expected a number");
}

std::vector<double> numbers(const json& j, const std::string& key, std::size_t len, std::optional<double> lam) {
  if (!j.is_array()) fail(key, "expected an array of numbers");
  if (len && j.size() != len) fail(key, fmt::format("expected {} entries, got {}", len, j.size()));
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number(j[i], fmt::format("{}[{}]", key, i), lam));
  return out;
}

std::vector<std::pair<double, double>> intervals(const json& j, const std::string& key, std::size_t len,
                                                 std::optional<double> lam) {
  if (!j.is_array() || j.empty()) fail(key, "expected a non-empty array of [lo, hi] pairs");
  if (len && j.size() != len) fail(key, fmt::format("expected {} intervals, got {}", len, j.size()));
  std::vector<std::pair<double, double>> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string k = fmt::format("{}[{}]", key, i);
    const auto v = numbers(j[i], k, 2, lam);
    if (!(v[0] <= v[1])) fail(k, "interval must have lo <= hi");
    out.emplace_back(v[0], v[1]);
  }
  return out;
}

exprs::Expr expression(const json& j, const std::string& key, int dim) {
  if (!j.is_string()) fail(key, "expected an expression string");
  try {
    return exprs::parse(j.get<std::string>(), dim);
  } catch (const exprs::ParseError& err) {
    fail(key, fmt::format("bad expression: {}", err.what()));
  }
}

std::size_t count(const json& j, const std::string& key, std::size_t lo) {
  if (!j.is_number_integer() || j.get<long long>() < static_cast<long long>(lo))
    fail(key, fmt::format("expected an integer >= {}", lo));
  return j.get<std::size_t>();
}

SetRep set_from(const json& j, std::size_t dim, const std::string& key, std::optional<double> lam) {
  if (!j.is_object()) fail(key, "expected a set description object");
  const std::string type = need(j, key, "type").is_string() ? j.at("type").get<std::string>() : "";
  const std::string tkey = key + ".type";
  try {
    if (type == "empty") {
      allow_keys(j, key, {"type"});
      return SetRep::empty(dim);
    }
    if (type == "cloud") {
      allow_keys(j, key, {"type", "points"});
      const json& pts = need(j, key, "points");
      if (!pts.is_array() || pts.empty()) fail(key + ".points", "expected a non-empty array of points");
      std::vector<Point> out;
      for (std::size_t i = 0; i < pts.size(); ++i)
        out.emplace_back(numbers(pts[i], fmt::format("{}.points[{}]", key, i), dim, lam));
      return SetRep::point_cloud(out);
    }
    if (type == "polyhedron") {
      allow_keys(j, key, {"type", "rows"});
      const json& rows = need(j, key, "rows");
      if (!rows.is_array() || rows.empty()) fail(key + ".rows", "expected a non-empty array of [a1, ..., an, b] rows");
      std::vector<Vector> normals;
      std::vector<double> offsets;
      for (std::size_t i = 0; i < rows.size(); ++i) {
        auto r = numbers(rows[i], fmt::format("{}.rows[{}]", key, i), dim + 1, lam);
        offsets.push_back(r.back());
        r.pop_back();
        normals.emplace_back(r);
      }
      return SetRep::polyhedron(normals, offsets);
    }
    if (type == "box") {
      allow_keys(j, key, {"type", "domain"});
      const auto d = intervals(need(j, key, "domain"), key + ".domain", dim, lam);
      Point lo(dim), hi(dim);
      for (std::size_t i = 0; i < dim; ++i) std::tie(lo[i], hi[i]) = d[i];
      return SetRep::box(lo, hi);
    }
    if (type == "ball") {
      allow_keys(j, key, {"type", "center", "radius", "closed"});
      const Point c(numbers(need(j, key, "center"), key + ".center", dim, lam));
      const double r = number(need(j, key, "radius"), key + ".radius", lam);
      bool closed = true;
      if (j.contains("closed")) {
        if (!j.at("closed").is_boolean()) fail(key + ".closed", "expected true or false");
        closed = j.at("closed").get<bool>();
      }
      return SetRep::ball(c, r, closed);
    }
    if (type == "patch") {
      allow_keys(j, key, {"type", "map", "domain", "grid"});
      const auto dom = intervals(need(j, key, "domain"), key + ".domain", 0, lam);
      const json& m = need(j, key, "map");
      if (!m.is_array() || m.size() != dim) fail(key + ".map", fmt::format("expected {} expression strings", dim));
      std::vector<exprs::Expr> map;
      for (std::size_t i = 0; i < dim; ++i)
        map.push_back(expression(m[i], fmt::format("{}.map[{}]", key, i), static_cast<int>(dom.size())));
      const int grid = j.contains("grid") ? static_cast<int>(count(j.at("grid"), key + ".grid", 2)) : 201;
      return SetRep::patch(map, dom, grid);
    }
    if (type == "sublevel") {
      allow_keys(j, key, {"type", "map", "level", "domain"});
      const exprs::Expr e = expression(need(j, key, "map"), key + ".map", static_cast<int>(dim));
      const double level = number(need(j, key, "level"), key + ".level", lam);
      std::optional<sets::Box> box;
      if (j.contains("domain")) {
        const auto d = intervals(j.at("domain"), key + ".domain", dim, lam);
        box = sets::Box{Point(dim), Point(dim)};
        for (std::size_t i = 0; i < dim; ++i) std::tie(box->lo[i], box->hi[i]) = d[i];
      }
      return SetRep::sublevel(ScalarField::from_expr(e), level, box);
    }
    if (type == "union") {
      allow_keys(j, key, {"type", "members"});
      const json& ms = need(j, key, "members");
      if (!ms.is_array() || ms.empty()) fail(key + ".members", "expected a non-empty array of sets");
      std::vector<SetRep> members;
      for (std::size_t i = 0; i < ms.size(); ++i)
        members.push_back(set_from(ms[i], dim, fmt::format("{}.members[{}]", key, i), lam));
      return SetRep::union_of(members);
    }
  } catch (const std::invalid_argument& err) {
    fail(key, err.what());
  }
  fail(tkey, "unknown set type '" + type +
                 "' (expected empty, cloud, polyhedron, box, ball, patch, sublevel or union)");
}

Params params_from(const json& j, const std::string& key) {
  allow_keys(j, key,
             {"tol", "angular_tol", "distance_tol", "curvature_slack", "schedule_base", "schedule_ratio",
              "schedule_len", "samples", "seed", "mode", "order", "direction", "force_sampled"});
  Params p;
  auto positive = [&](const char* name, std::optional<double>& slot) {
    if (!j.contains(name)) return;
    const double v = number(j.at(name), key + "." + name, std::nullopt);
    if (!(v > 0)) fail(key + "." + name, "must be positive");
    slot = v;
  };
  positive("tol", p.tol);
  positive("angular_tol", p.angular_tol);
  positive("distance_tol", p.distance_tol);
  positive("curvature_slack", p.curvature_slack);
  positive("schedule_base", p.schedule_base);
  positive("schedule_ratio", p.schedule_ratio);
  if (j.contains("schedule_len")) p.schedule_len = count(j.at("schedule_len"), key + ".schedule_len", 1);
  if (j.contains("samples")) p.samples = count(j.at("samples"), key + ".samples", 1);
  if (j.contains("seed")) p.seed = static_cast<std::uint64_t>(count(j.at("seed"), key + ".seed", 0));
  if (j.contains("order")) p.order = static_cast<int>(count(j.at("order"), key + ".order", 0));
  if (j.contains("mode")) {
    if (!j.at("mode").is_string()) fail(key + ".mode", "expected \"max\" or \"min\"");
    p.mode = j.at("mode").get<std::string>();
    if (*p.mode != "max" && *p.mode != "min") fail(key + ".mode", "expected \"max\" or \"min\"");
  }
  if (j.contains("force_sampled")) {
    if (!j.at("force_sampled").is_boolean()) fail(key + ".force_sampled", "expected true or false");
    p.force_sampled = j.at("force_sampled").get<bool>();
  }
  if (j.contains("direction")) p.direction = numbers(j.at("direction"), key + ".direction", 0, std::nullopt);
  return p;
}

Family family_from(const json& j, std::size_t dim, const std::string& key) {
  allow_keys(j, key, {"lambdas", "base", "ratio", "length", "set", "members"});
  Family f;
  if (j.contains("lambdas")) {
    f.schedule = setlimits::Schedule{numbers(j.at("lambdas"), key + ".lambdas", 0, std::nullopt)};
    try {
      f.schedule->validate();
    } catch (const std::invalid_argument& err) {
      fail(key + ".lambdas", err.what());
    }
    if (j.contains("base") || j.contains("ratio") || j.contains("length"))
      fail(key, "give either lambdas or base/ratio/length, not both");
  }
  if (j.contains("base")) f.base = number(j.at("base"), key + ".base", std::nullopt);
  if (j.contains("ratio")) f.ratio = number(j.at("ratio"), key + ".ratio", std::nullopt);
  if (j.contains("length")) f.length = count(j.at("length"), key + ".length", 8);
  if (j.contains("set") == j.contains("members")) fail(key, "give exactly one of 'set' (template) or 'members'");
  if (j.contains("set")) {
    // Validate the template at lam = 1 now so errors surface at load time.
    set_from(j.at("set"), dim, key + ".set", 1.0);
    f.templ = j.at("set");
  } else {
    const json& ms = j.at("members");
    if (!ms.is_array() || ms.empty()) fail(key + ".members", "expected a non-empty array of sets");
    for (std::size_t i = 0; i < ms.size(); ++i)
      f.members.push_back(set_from(ms[i], dim, fmt::format("{}.members[{}]", key, i), std::nullopt));
  }
  return f;
}

// Best-effort line of a dotted key path: each key is searched for after the
// previous one.
std::optional<std::size_t> line_of(const std::string& text, const std::string& key) {
  std::size_t pos = 0;
  bool found = false;
  std::stringstream ss(key);
  std::string part;
  while (std::getline(ss, part, '.')) {
    if (const auto b = part.find('['); b != std::string::npos) part.resize(b);
    if (part.empty()) continue;
    const std::string quoted = "\"" + part + "\"";
    std::size_t at = pos;
    for (;;) {
      at = text.find(quoted, at);
      if (at == std::string::npos) break;
      std::size_t k = at + quoted.size();
      while (k < text.size() && std::isspace(static_cast<unsigned char>(text[k]))) ++k;
      if (k < text.size() && text[k] == ':') break;
      at += quoted.size();
    }
    if (at == std::string::npos) break;
    pos = at;
    found = true;
  }
  if (!found) return std::nullopt;
  return 1 + std::count(text.begin(), text.begin() + static_cast<long>(pos), '\n');
}

ProblemFile problem_from(const json& j) {
  allow_keys(j, "", {"dim", "function", "set", "other_set", "point", "family", "params"});
  ProblemFile p;
  p.dim = count(need(j, "dim", "dim"), "dim", 1);
  if (j.contains("function")) {
    if (!j.at("function").is_string()) fail("function", "expected an expression string or a built-in name");
    p.function_text = j.at("function").get<std::string>();
    try {
      p.function = parse_function(*p.function_text, p.dim);
    } catch (const std::exception& err) {
      fail("function", err.what());
    }
  }
  if (j.contains("set")) p.set = set_from(j.at("set"), p.dim, "set", std::nullopt);
  if (j.contains("other_set")) p.other_set = set_from(j.at("other_set"), p.dim, "other_set", std::nullopt);
  if (j.contains("point")) p.point = Point(numbers(j.at("point"), "point", p.dim, std::nullopt));
  if (j.contains("family")) p.family = family_from(j.at("family"), p.dim, "family");
  if (j.contains("params")) p.params = params_from(j.at("params"), "params");
  return p;
}

}  // namespace

void Params::merge(const Params& over) {
  auto take = [](auto& mine, const auto& theirs) {
    if (theirs) mine = theirs;
  };
  take(tol, over.tol);
  take(angular_tol, over.angular_tol);
  take(distance_tol, over.distance_tol);
  take(curvature_slack, over.curvature_slack);
  take(schedule_base, over.schedule_base);
  take(schedule_ratio, over.schedule_ratio);
  take(schedule_len, over.schedule_len);
  take(samples, over.samples);
  take(seed, over.seed);
  take(mode, over.mode);
  take(order, over.order);
  take(direction, over.direction);
  take(force_sampled, over.force_sampled);
}

setlimits::SetFamily Family::build(const setlimits::Schedule& s, std::size_t dim) const {
  if (templ) {
    const json t = *templ;
    return setlimits::SetFamily(
        [t, dim](double lam, std::size_t) {
          try {
            return set_from(t, dim, "family.set", lam);
          } catch (const SchemaError& e) {
            throw InputError(fmt::format("key {}: {} (lam = {})", e.key, e.message, lam));
          }
        },
        s);
  }
  const auto ms = members;
  return setlimits::SetFamily([ms](double, std::size_t j) { return ms[j % ms.size()]; }, s);
}

ScalarField parse_function(const std::string& text, std::size_t dim) {
  const auto names = ScalarField::builtin_names();
  if (std::find(names.begin(), names.end(), text) != names.end()) {
    ScalarField f = ScalarField::builtin(text);
    if (static_cast<std::size_t>(f.dim()) != dim)
      throw std::invalid_argument(fmt::format("built-in '{}' has dimension {}, problem has {}", text, f.dim(), dim));
    return f;
  }
  return ScalarField::from_expression(text, static_cast<int>(dim));
}

sets::SetRep parse_set(const json& j, std::size_t dim, const std::string& key, std::optional<double> lam) {
  try {
    return set_from(j, dim, key, lam);
  } catch (const SchemaError& e) {
    throw InputError(fmt::format("key {}: {}", e.key, e.message));
  }
}

ProblemFile parse_problem(const std::string& text, const std::string& origin) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& err) {
    const std::size_t byte = std::min<std::size_t>(err.byte, text.size());
    const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<long>(byte ? byte - 1 : 0), '\n');
    throw InputError(fmt::format("{}:{}: malformed JSON: {}", origin, line, err.what()));
  }
  try {
    ProblemFile p = problem_from(j);
    p.path = origin;
    return p;
  } catch (const SchemaError& e) {
    const auto line = line_of(text, e.key);
    throw InputError(line ? fmt::format("{}:{}: key {}: {}", origin, *line, e.key, e.message)
                          : fmt::format("{}: key {}: {}", origin, e.key, e.message));
  }
}

ProblemFile load_problem(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(fmt::format("{}: cannot open problem file", path));
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_problem(ss.str(), path);
}

}  // namespace tangency::cli
