#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "fairnav/citymap.hpp"
#include "fairnav/error.hpp"
#include "fairnav/fairness.hpp"
#include "fairnav/io.hpp"
#include "fairnav/planner.hpp"

namespace py = pybind11;
using namespace fairnav;

namespace {

using Point = std::pair<int, int>;

FairnessSpec spec_of(const std::string& text) { return parse_spec(text); }

std::pair<PlannerParams, Json> params_of(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(std::string("params: ") + e.what());
  }
  PlannerParams params = params_from_json(j);
  validate_params(params);
  return {params, to_json(params)};
}

Path path_of(const std::vector<Point>& steps) {
  Path path;
  for (auto [x, y] : steps) path.steps.push_back({x, y});
  return path;
}

std::string dump(const Json& j) { return j.dump(); }

}  // namespace

PYBIND11_MODULE(_fairnav, m) {
  m.doc() = "Fairness-aware coverage planning on demographic grid maps.";

  auto base = py::register_exception<Error>(m, "FairnavError", PyExc_RuntimeError);
  py::register_exception<ParseError>(m, "ParseError", base.ptr());
  py::register_exception<ValidationError>(m, "ValidationError", base.ptr());
  py::register_exception<MismatchError>(m, "MismatchError", base.ptr());
  py::register_exception<UnsupportedSpecError>(m, "UnsupportedSpecError", base.ptr());
  auto infeasible = py::register_exception<InfeasibleError>(m, "InfeasibleError", base.ptr());
  py::register_exception<GuardLimitError>(m, "GuardLimitError", infeasible.ptr());

  py::class_<CityMap>(m, "City")
      .def_property_readonly("width", &CityMap::width)
      .def_property_readonly("height", &CityMap::height)
      .def_property_readonly("base", [](const CityMap& c) { return Point{c.base().x, c.base().y}; })
      .def_property_readonly("attributes",
                             [](const CityMap& c) {
                               std::vector<std::pair<std::string, std::vector<std::string>>> out;
                               for (const auto& a : c.attributes()) out.emplace_back(a.name, a.categories);
                               return out;
                             })
      .def("traversable", [](const CityMap& c, int x, int y) { return c.traversable({x, y}); })
      .def("to_json", &save_city)
      .def("__eq__", &CityMap::operator==)
      .def("__repr__", [](const CityMap& c) {
        return "<City " + std::to_string(c.width()) + "x" + std::to_string(c.height()) + ">";
      });

  m.def("parse_city", &parse_city, py::arg("text"));
  m.def("preset_names", &preset_names);
  m.def(
      "generate_city",
      [](const std::string& preset, int width, int height, std::uint64_t seed) {
        return generate_city(synthetic_preset(preset, width, height), seed);
      },
      py::arg("preset"), py::arg("width"), py::arg("height"), py::arg("seed") = 1);
  m.def(
      "city_distribution",
      [](const CityMap& c, const std::string& attribute) { return city_distribution(c, attribute).mass; },
      py::arg("city"), py::arg("attribute"));

  m.def(
      "js_distance",
      [](const std::vector<double>& p, const std::vector<double>& q) { return js_distance(p, q); },
      py::arg("p"), py::arg("q"));
  m.def(
      "path_audit",
      [](const CityMap& c, const std::vector<Point>& path, const std::string& attribute, int radius) {
        const PathAudit audit = path_audit(c, path_of(path), attribute, radius);
        return dump(to_json(audit, c.attributes()[c.attribute_index(attribute)].categories));
      },
      py::arg("city"), py::arg("path"), py::arg("attribute"), py::arg("sensor_radius") = 0);
  m.def(
      "unfairness",
      [](const CityMap& c, const std::vector<Point>& path, const std::string& spec, int radius) {
        return unfairness(c, path_of(path), spec_of(spec), radius);
      },
      py::arg("city"), py::arg("path"), py::arg("spec"), py::arg("sensor_radius") = 0);

  m.def(
      "evolve_pareto",
      [](const CityMap& c, const std::string& spec_text, const std::string& params_text) {
        const FairnessSpec spec = spec_of(spec_text);
        const auto [params, params_json] = params_of(params_text);
        ParetoFront front;
        {
          py::gil_scoped_release release;
          front = evolve_pareto(c, spec, params);
        }
        return dump(front_document(spec, params_json, front));
      },
      py::arg("city"), py::arg("spec"), py::arg("params"));
  m.def(
      "refine",
      [](const CityMap& c, const std::string& front_text, const std::vector<Point>& waypoints,
         const std::string& params_text) {
        const FrontDocument previous = parse_front_document(front_text);
        const auto [params, params_json] = params_of(params_text);
        std::vector<Coord> pins;
        for (auto [x, y] : waypoints) pins.push_back({x, y});
        ParetoFront front;
        {
          py::gil_scoped_release release;
          front = refine(c, previous.spec, params, pins, previous.front);
        }
        return dump(front_document(previous.spec, params_json, front));
      },
      py::arg("city"), py::arg("front"), py::arg("waypoints"), py::arg("params"));
  m.def(
      "surrogate_plan",
      [](const CityMap& c, const std::string& spec_text, const std::string& params_text, double weight) {
        const FairnessSpec spec = spec_of(spec_text);
        const auto [params, params_json] = params_of(params_text);
        Solution s;
        {
          py::gil_scoped_release release;
          s = surrogate_plan(c, spec, params, weight);
        }
        return dump(solution_document(spec, params_json, weight, s));
      },
      py::arg("city"), py::arg("spec"), py::arg("params"), py::arg("weight"));
  m.def(
      "oracle_pareto",
      [](const CityMap& c, const std::string& spec_text, int budget, int radius) {
        const FairnessSpec spec = spec_of(spec_text);
        ParetoFront front;
        {
          py::gil_scoped_release release;
          front = oracle_pareto(c, spec, budget, radius);
        }
        PlannerParams params;
        params.budget = budget;
        params.sensor_radius = radius;
        return dump(front_document(spec, to_json(params), front));
      },
      py::arg("city"), py::arg("spec"), py::arg("budget"), py::arg("sensor_radius") = 0);
  m.def(
      "hypervolume",
      [](const std::string& front_text, std::optional<std::pair<double, double>> reference) {
        const FrontDocument doc = parse_front_document(front_text);
        ReferencePoint ref = default_reference(doc.spec);
        if (reference) ref = {reference->first, reference->second};
        return hypervolume(doc.front, ref);
      },
      py::arg("front"), py::arg("reference") = py::none());
}
