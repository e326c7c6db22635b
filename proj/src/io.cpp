#include "fairnav/io.hpp"

#include "fairnav/error.hpp"
#include "json_util.hpp"

namespace fairnav {

Json to_json(const FairnessSpec& spec) {
  Json j;
  j["kind"] = to_string(spec.kind);
  if (!spec.attribute.empty()) j["attribute"] = spec.attribute;
  if (!spec.target.empty()) j["target"] = spec.target;
  return j;
}

FairnessSpec spec_from_json(const Json& j) {
  if (!j.is_object()) throw ParseError("spec: expected an object");
  FairnessSpec spec;
  spec.kind = parse_spec_kind(detail::as_string(detail::field(j, "kind", "spec"), "spec.kind"));
  if (const Json* a = detail::optional_field(j, "attribute")) {
    spec.attribute = detail::as_string(*a, "spec.attribute");
  }
  if (const Json* t = detail::optional_field(j, "target")) {
    detail::as_array(*t, "spec.target");
    for (std::size_t k = 0; k < t->size(); ++k) {
      spec.target.push_back(detail::as_double((*t)[k], detail::item("spec.target", k)));
    }
  }
  return spec;
}

FairnessSpec parse_spec(std::string_view text) { return spec_from_json(detail::parse_document(text)); }

Json to_json(const PlannerParams& p) {
  Json j;
  j["population_size"] = p.population_size;
  j["generations"] = p.generations;
  j["mutation_rate"] = p.mutation_rate;
  j["crossover_rate"] = p.crossover_rate;
  j["seed"] = p.seed;
  j["budget"] = p.budget;
  j["sensor_radius"] = p.sensor_radius;
  return j;
}

PlannerParams params_from_json(const Json& j, PlannerParams p) {
  if (j.is_null()) return p;
  if (!j.is_object()) throw ParseError("params: expected an object");
  auto get_int = [&](const char* key, int& into) {
    if (const Json* v = detail::optional_field(j, key)) {
      into = static_cast<int>(detail::as_int(*v, detail::child("params", key)));
    }
  };
  auto get_double = [&](const char* key, double& into) {
    if (const Json* v = detail::optional_field(j, key)) into = detail::as_double(*v, detail::child("params", key));
  };
  get_int("population_size", p.population_size);
  get_int("generations", p.generations);
  get_double("mutation_rate", p.mutation_rate);
  get_double("crossover_rate", p.crossover_rate);
  if (const Json* v = detail::optional_field(j, "seed")) {
    if (!v->is_number_unsigned() && !(v->is_number_integer() && v->get<std::int64_t>() >= 0)) {
      throw ParseError("params.seed: expected a non-negative integer");
    }
    p.seed = v->get<std::uint64_t>();
  }
  get_int("budget", p.budget);
  get_int("sensor_radius", p.sensor_radius);
  return p;
}

Json to_json(const Path& path) {
  Json steps = Json::array();
  for (Coord c : path.steps) steps.push_back(detail::coord_json(c));
  return steps;
}

Path path_from_json(const Json& j, const std::string& where) {
  detail::as_array(j, where);
  Path path;
  for (std::size_t i = 0; i < j.size(); ++i) path.steps.push_back(detail::as_coord(j[i], detail::item(where, i)));
  return path;
}

Json to_json(const GroupDistribution& dist) {
  return Json{{"attribute", dist.attribute}, {"mass", dist.mass}};
}

Json to_json(const PathAudit& audit, const std::vector<std::string>& categories) {
  Json j;
  j["attribute"] = audit.attribute;
  j["categories"] = categories;
  j["found_total"] = audit.found_total;
  j["found"] = audit.found;
  j["path_distribution"] = audit.path_distribution.mass;
  j["city_distribution"] = audit.city_distribution.mass;
  j["utility"] = audit.utility;
  if (audit.unfairness) j["unfairness"] = *audit.unfairness;
  return j;
}

Json front_document(const FairnessSpec& spec, const Json& params, const ParetoFront& front) {
  Json doc;
  doc["format"] = kFrontFormat;
  doc["spec"] = to_json(spec);
  doc["params"] = params;
  Json solutions = Json::array();
  for (const auto& s : front.solutions) {
    solutions.push_back(Json{{"efficiency", s.efficiency}, {"unfairness", s.unfairness}, {"path", to_json(s.path)}});
  }
  doc["solutions"] = std::move(solutions);
  return doc;
}

namespace {

Solution parse_solution(const Json& j, const std::string& where) {
  Solution s;
  s.efficiency = detail::as_int(detail::field(j, "efficiency", where), detail::child(where, "efficiency"));
  s.unfairness = detail::as_double(detail::field(j, "unfairness", where), detail::child(where, "unfairness"));
  s.path = path_from_json(detail::field(j, "path", where), detail::child(where, "path"));
  return s;
}

}  // namespace

FrontDocument parse_front_document(std::string_view text) {
  const Json doc = detail::parse_document(text);
  const std::string& format = detail::as_string(detail::field(doc, "format", ""), "format");
  FrontDocument out;
  out.spec = spec_from_json(detail::field(doc, "spec", ""));
  if (const Json* params = detail::optional_field(doc, "params")) out.params = *params;
  if (format == kFrontFormat) {
    const Json& list = detail::as_array(detail::field(doc, "solutions", ""), "solutions");
    for (std::size_t i = 0; i < list.size(); ++i) {
      out.front.solutions.push_back(parse_solution(list[i], detail::item("solutions", i)));
    }
  } else if (format == kSolutionFormat) {
    out.front.solutions.push_back(parse_solution(doc, ""));
  } else {
    throw ParseError("format: expected \"" + std::string(kFrontFormat) + "\" or \"" +
                     std::string(kSolutionFormat) + "\"");
  }
  return out;
}

Json solution_document(const FairnessSpec& spec, const Json& params, double weight,
                       const Solution& solution) {
  Json doc;
  doc["format"] = kSolutionFormat;
  doc["spec"] = to_json(spec);
  doc["params"] = params;
  doc["weight"] = weight;
  doc["efficiency"] = solution.efficiency;
  doc["unfairness"] = solution.unfairness;
  doc["path"] = to_json(solution.path);
  return doc;
}

std::vector<Coord> waypoints_from_json(const Json& j, const std::string& where) {
  detail::as_array(j, where);
  std::vector<Coord> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(detail::as_coord(j[i], detail::item(where, i)));
  return out;
}

std::string dump_document(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace fairnav
