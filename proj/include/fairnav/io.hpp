#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "fairnav/fairness.hpp"
#include "fairnav/planner.hpp"
#include "json.hpp"

namespace fairnav {

using Json = nlohmann::ordered_json;

inline constexpr std::string_view kFrontFormat = "fairnav-front/1";
inline constexpr std::string_view kSolutionFormat = "fairnav-solution/1";

Json to_json(const FairnessSpec& spec);
FairnessSpec spec_from_json(const Json& j);
/// Parses the wire form from text. Throws ParseError.
FairnessSpec parse_spec(std::string_view text);

Json to_json(const PlannerParams& params);
/// Missing fields keep their defaults.
PlannerParams params_from_json(const Json& j, PlannerParams defaults = {});

Json to_json(const Path& path);
Path path_from_json(const Json& j, const std::string& where = "path");

Json to_json(const GroupDistribution& dist);
Json to_json(const PathAudit& audit, const std::vector<std::string>& categories);

/// Pareto export document.
Json front_document(const FairnessSpec& spec, const Json& params, const ParetoFront& front);

struct FrontDocument {
  FairnessSpec spec;
  Json params;
  ParetoFront front;
};

/// Reads a Pareto export, or a single surrogate solution as a one-point
/// front. Throws ParseError.
FrontDocument parse_front_document(std::string_view text);

Json solution_document(const FairnessSpec& spec, const Json& params, double weight,
                       const Solution& solution);

std::vector<Coord> waypoints_from_json(const Json& j, const std::string& where = "waypoints");

/// Canonical text of a document: two-space indent and a trailing newline.
std::string dump_document(const Json& j);

}  // namespace fairnav
