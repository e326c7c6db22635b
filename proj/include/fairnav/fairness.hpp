#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fairnav/citymap.hpp"
#include "fairnav/grid.hpp"

namespace fairnav {

enum class SpecKind {
  DemographicParity,
  AffirmativeAction,
  RawlsianGroups,
  RawlsianLocations,
  LocationTarget,
};

std::string_view to_string(SpecKind kind);
/// Accepts the wire names ("demographic_parity", ...). Throws ParseError.
SpecKind parse_spec_kind(std::string_view name);

/// A distributive-justice specification. Every kind is oriented so that
/// lower unfairness is better.
struct FairnessSpec {
  SpecKind kind = SpecKind::DemographicParity;
  /// Audited attribute. Location kinds may leave it empty, in which case
  /// efficiency is measured on the city's first attribute.
  std::string attribute;
  /// Category mass (AffirmativeAction) or region weights (LocationTarget).
  std::vector<double> target;

  bool operator==(const FairnessSpec&) const = default;
};

bool is_group_spec(SpecKind kind);
bool is_distribution_spec(SpecKind kind);

/// Throws MismatchError when the spec cannot be evaluated on this city
/// (unknown attribute, missing regions, wrong target length or mass).
void validate_spec(const CityMap& city, const FairnessSpec& spec);

/// Attribute whose head-count is the efficiency objective under `spec`.
std::size_t efficiency_attribute(const CityMap& city, const FairnessSpec& spec);

/// Square root of the base-2 Jensen-Shannon divergence, in [0, 1].
/// Throws MismatchError on length mismatch and ValidationError when either
/// input is not a probability vector.
double js_distance(std::span<const double> p, std::span<const double> q);
double js_distance(const GroupDistribution& p, const GroupDistribution& q);

/// Closure, adjacency, bounds and traversability of a tour; budget is not
/// checked. Returns an explanation of the first violation, or nullopt.
std::optional<std::string> path_defect(const CityMap& city, const Path& path);

/// Indices of the traversable cells within Chebyshev distance `radius` of
/// any visited cell, ascending.
std::vector<std::size_t> covered_cells(const CityMap& city, std::span<const Coord> steps,
                                       int radius);

/// Moves that arrive in each region, in declaration order.
std::vector<std::int64_t> region_visits(const CityMap& city, const Path& path);

struct PathAudit {
  std::string attribute;
  std::int64_t found_total = 0;
  std::vector<std::int64_t> found;
  GroupDistribution path_distribution;
  GroupDistribution city_distribution;
  /// Filled only when the audit was made against a spec.
  std::optional<double> unfairness;
  /// found[g] / city total of g, or 0 for categories absent from the city.
  std::vector<double> utility;
};

/// Counts every covered person once. Throws ValidationError for an
/// invalid path and MismatchError for an unknown attribute.
PathAudit path_audit(const CityMap& city, const Path& path, std::string_view attribute,
                     int sensor_radius = 0);

double unfairness(const CityMap& city, const Path& path, const FairnessSpec& spec,
                  int sensor_radius = 0);

/// Scores paths against one spec on one city. Construction validates the
/// spec; evaluate() trusts its path argument and reuses scratch space, so
/// an instance must not be shared between threads.
class Evaluator {
 public:
  struct Score {
    std::int64_t efficiency = 0;
    double unfairness = 1.0;
  };

  Evaluator(const CityMap& city, FairnessSpec spec, int sensor_radius);

  Score evaluate(const Path& path);
  /// Same as evaluate(), but also exposes the covered cell indices.
  Score evaluate(const Path& path, std::vector<std::size_t>& covered);

  const CityMap& city() const { return *city_; }
  const FairnessSpec& spec() const { return spec_; }
  int sensor_radius() const { return radius_; }
  std::size_t attribute() const { return attribute_; }
  /// Distribution the distribution-based kinds compare against.
  const std::vector<double>& reference() const { return reference_; }

 private:
  void cover(const Path& path, std::vector<std::size_t>& covered);

  const CityMap* city_;
  FairnessSpec spec_;
  int radius_;
  std::size_t attribute_;
  std::vector<double> reference_;
  std::vector<std::uint32_t> stamp_;
  std::uint32_t epoch_ = 0;
  std::vector<std::size_t> scratch_;
};

}  // namespace fairnav
