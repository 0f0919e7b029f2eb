#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <nlohmann/json.hpp>

#include <sstream>

#include "commands.hpp"
#include "problem.hpp"
#include "tangency/calculus.hpp"
#include "tangency/cones.hpp"
#include "tangency/regula.hpp"
#include "tangency/setlimits.hpp"

namespace py = pybind11;
using namespace tangency;

namespace {

sets::SetRep set_from(const std::string& json_text, std::size_t dim) {
  return cli::parse_set(nlohmann::json::parse(json_text), dim, "set");
}

std::vector<std::vector<double>> rows(const std::vector<Vector>& vs) {
  std::vector<std::vector<double>> out;
  for (const auto& v : vs) out.push_back(v.data());
  return out;
}

py::dict cone_dict(const cones::Cone& c) {
  py::dict d;
  d["kind"] = cones::to_string(c.kind);
  d["apex"] = c.apex.data();
  d["generators"] = rows(c.gens);
  d["full_space"] = c.full_space;
  d["inconclusive"] = c.inconclusive;
  d["note"] = c.note;
  return d;
}

cones::BlowUpParams blowup(bool force_sampled) {
  cones::BlowUpParams p;
  p.force_sampled = force_sampled;
  return p;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Tangent cones, set limits, differentials and first-order extremum conditions";

  py::register_exception<cli::InputError>(m, "InputError", PyExc_ValueError);

  m.def(
      "run",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        int code = 0;
        {
          py::gil_scoped_release release;
          code = cli::run(args, out, err);
        }
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Run the command-line tool in-process; returns (exit_code, stdout, stderr).");

  m.def(
      "tangent_cone",
      [](const std::string& set_json, const std::vector<double>& x, const std::string& kind, bool force_sampled) {
        const Point p(x);
        const sets::SetRep a = set_from(set_json, p.dim());
        const auto params = blowup(force_sampled);
        if (kind == "upper") return cone_dict(cones::upper_tangent_cone(a, p, params));
        if (kind == "lower") return cone_dict(cones::lower_tangent_cone(a, p, params));
        if (kind == "federer") return cone_dict(cones::federer_cone(a, p, params));
        throw std::invalid_argument("kind must be upper, lower or federer");
      },
      py::arg("set_json"), py::arg("point"), py::arg("kind") = "upper", py::arg("force_sampled") = false);

  m.def(
      "check_regula",
      [](const std::string& function, const std::string& set_json, const std::vector<double>& x,
         const std::string& mode) {
        const Point p(x);
        const auto f = cli::parse_function(function, p.dim());
        const auto c = regula::check_regula(f, set_from(set_json, p.dim()), p, regula::parse_mode(mode));
        py::dict d;
        d["verdict"] = regula::label(c.verdict);
        d["gradient"] = c.gradient.data();
        d["cone_generators"] = rows(c.cone.gens);
        d["worst_direction"] = c.worst_direction.data();
        d["worst_value"] = c.worst_value;
        d["slack"] = c.slack;
        return d;
      },
      py::arg("function"), py::arg("set_json"), py::arg("point"), py::arg("mode") = "max");

  m.def(
      "hausdorff_distance",
      [](const std::string& a_json, const std::string& b_json, std::size_t dim, std::size_t density,
         std::uint64_t seed) {
        return setlimits::hausdorff_distance(set_from(a_json, dim), set_from(b_json, dim), density, seed);
      },
      py::arg("a_json"), py::arg("b_json"), py::arg("dim"), py::arg("density") = 200, py::arg("seed") = 1);

  m.def(
      "peano_derivative",
      [](const std::string& function, double x, int n) {
        return calculus::peano_derivative(cli::parse_function(function, 1), x, n).value;
      },
      py::arg("function"), py::arg("x"), py::arg("n"));

  m.def(
      "chain_rule_row",
      [](const std::vector<double>& v) {
        const auto r = calculus::chain_rule_row(Vector(v));
        py::dict d;
        d["composite"] = r.composite;
        d["chain_rule"] = r.chain_rule;
        d["discrepancy"] = r.discrepancy;
        return d;
      },
      py::arg("direction"));
}
