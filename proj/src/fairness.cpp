#include "fairnav/fairness.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fairnav/error.hpp"

namespace fairnav {

namespace {

constexpr double kMassTolerance = 1e-6;

void require_probability(std::span<const double> p, const char* name) {
  double sum = 0.0;
  for (double m : p) {
    if (!std::isfinite(m) || m < 0.0) {
      throw ValidationError(std::string(name) + " has a negative or non-finite entry");
    }
    sum += m;
  }
  if (sum == 0.0) throw ValidationError(std::string(name) + " has zero mass");
  if (std::fabs(sum - 1.0) > kMassTolerance) {
    throw ValidationError(std::string(name) + " does not sum to 1");
  }
}

double shares_distance(std::span<const std::int64_t> counts, std::span<const double> reference) {
  const std::int64_t total = std::accumulate(counts.begin(), counts.end(), std::int64_t{0});
  if (total == 0) return 1.0;
  std::vector<double> shares(counts.size());
  for (std::size_t k = 0; k < counts.size(); ++k) {
    shares[k] = static_cast<double>(counts[k]) / static_cast<double>(total);
  }
  return js_distance(shares, reference);
}

}  // namespace

std::string_view to_string(SpecKind kind) {
  switch (kind) {
    case SpecKind::DemographicParity: return "demographic_parity";
    case SpecKind::AffirmativeAction: return "affirmative_action";
    case SpecKind::RawlsianGroups: return "rawlsian_groups";
    case SpecKind::RawlsianLocations: return "rawlsian_locations";
    case SpecKind::LocationTarget: return "location_target";
  }
  return "unknown";
}

SpecKind parse_spec_kind(std::string_view name) {
  for (SpecKind kind : {SpecKind::DemographicParity, SpecKind::AffirmativeAction,
                        SpecKind::RawlsianGroups, SpecKind::RawlsianLocations,
                        SpecKind::LocationTarget}) {
    if (to_string(kind) == name) return kind;
  }
  throw ParseError("kind: unknown fairness spec kind '" + std::string(name) + "'");
}

bool is_group_spec(SpecKind kind) {
  return kind == SpecKind::DemographicParity || kind == SpecKind::AffirmativeAction ||
         kind == SpecKind::RawlsianGroups;
}

bool is_distribution_spec(SpecKind kind) {
  return kind == SpecKind::DemographicParity || kind == SpecKind::AffirmativeAction ||
         kind == SpecKind::LocationTarget;
}

void validate_spec(const CityMap& city, const FairnessSpec& spec) {
  if (city.attributes().empty()) throw MismatchError("city declares no attributes");
  if (is_group_spec(spec.kind) && spec.attribute.empty()) {
    throw MismatchError(std::string(to_string(spec.kind)) + " requires an attribute");
  }
  if (!spec.attribute.empty()) city.attribute_index(spec.attribute);

  auto check_target = [&](std::size_t expected, const char* what) {
    if (spec.target.size() != expected) {
      throw MismatchError("target must have one weight per " + std::string(what) + " (" +
                          std::to_string(expected) + "), got " + std::to_string(spec.target.size()));
    }
    try {
      require_probability(spec.target, "target");
    } catch (const ValidationError& e) {
      throw MismatchError(e.what());
    }
  };

  switch (spec.kind) {
    case SpecKind::DemographicParity:
    case SpecKind::RawlsianGroups:
      if (!spec.target.empty()) {
        throw MismatchError(std::string(to_string(spec.kind)) + " takes no target");
      }
      break;
    case SpecKind::AffirmativeAction:
      check_target(city.attributes()[city.attribute_index(spec.attribute)].categories.size(),
                   "category");
      break;
    case SpecKind::RawlsianLocations:
      if (city.regions().empty()) throw MismatchError("rawlsian_locations requires regions");
      if (!spec.target.empty()) throw MismatchError("rawlsian_locations takes no target");
      break;
    case SpecKind::LocationTarget:
      if (city.regions().empty()) throw MismatchError("location_target requires regions");
      check_target(city.regions().size(), "region");
      break;
  }
}

std::size_t efficiency_attribute(const CityMap& city, const FairnessSpec& spec) {
  if (!spec.attribute.empty()) return city.attribute_index(spec.attribute);
  if (city.attributes().empty()) throw MismatchError("city declares no attributes");
  return 0;
}

double js_distance(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) {
    throw MismatchError("distributions have different category counts (" +
                        std::to_string(p.size()) + " vs " + std::to_string(q.size()) + ")");
  }
  require_probability(p, "first distribution");
  require_probability(q, "second distribution");
  double divergence = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    const double m = 0.5 * (p[k] + q[k]);
    if (p[k] > 0.0) divergence += 0.5 * p[k] * std::log2(p[k] / m);
    if (q[k] > 0.0) divergence += 0.5 * q[k] * std::log2(q[k] / m);
  }
  return std::sqrt(std::clamp(divergence, 0.0, 1.0));
}

double js_distance(const GroupDistribution& p, const GroupDistribution& q) {
  return js_distance(std::span<const double>(p.mass), std::span<const double>(q.mass));
}

std::optional<std::string> path_defect(const CityMap& city, const Path& path) {
  if (path.steps.empty()) return "path is empty";
  if (path.steps.front() != city.base()) return "path does not start at the base";
  if (path.steps.back() != city.base()) return "path does not return to the base";
  for (std::size_t i = 0; i < path.steps.size(); ++i) {
    const Coord c = path.steps[i];
    if (!city.in_bounds(c)) return "step " + std::to_string(i) + " " + to_string(c) + " is out of bounds";
    if (!city.cell(c).traversable) {
      return "step " + std::to_string(i) + " " + to_string(c) + " is not traversable";
    }
    if (i > 0 && !adjacent4(path.steps[i - 1], c)) {
      return "steps " + std::to_string(i - 1) + " and " + std::to_string(i) + " are not 4-adjacent";
    }
  }
  return std::nullopt;
}

std::vector<std::size_t> covered_cells(const CityMap& city, std::span<const Coord> steps,
                                       int radius) {
  std::vector<bool> seen(city.cell_count(), false);
  std::vector<std::size_t> covered;
  for (Coord c : steps) {
    for (int dy = -radius; dy <= radius; ++dy) {
      for (int dx = -radius; dx <= radius; ++dx) {
        const Coord n{c.x + dx, c.y + dy};
        if (!city.traversable(n)) continue;
        const std::size_t i = city.index(n);
        if (!seen[i]) {
          seen[i] = true;
          covered.push_back(i);
        }
      }
    }
  }
  std::sort(covered.begin(), covered.end());
  return covered;
}

std::vector<std::int64_t> region_visits(const CityMap& city, const Path& path) {
  std::vector<std::int64_t> visits(city.regions().size(), 0);
  for (std::size_t i = 1; i < path.steps.size(); ++i) {
    const int r = city.region_of(city.index(path.steps[i]));
    if (r >= 0) ++visits[r];
  }
  return visits;
}

PathAudit path_audit(const CityMap& city, const Path& path, std::string_view attribute,
                     int sensor_radius) {
  if (auto defect = path_defect(city, path)) throw ValidationError("invalid path: " + *defect);
  if (sensor_radius < 0) throw ValidationError("sensor radius must be non-negative");
  const std::size_t a = city.attribute_index(attribute);
  const auto covered = covered_cells(city, path.steps, sensor_radius);

  PathAudit audit;
  audit.attribute = std::string(attribute);
  audit.found.assign(city.attributes()[a].categories.size(), 0);
  for (std::size_t i : covered) {
    const auto& counts = city.cells()[i].counts[a];
    for (std::size_t k = 0; k < counts.size(); ++k) audit.found[k] += counts[k];
  }
  audit.found_total = std::accumulate(audit.found.begin(), audit.found.end(), std::int64_t{0});
  audit.path_distribution = {audit.attribute, std::vector<double>(audit.found.size(), 0.0)};
  if (audit.found_total > 0) {
    for (std::size_t k = 0; k < audit.found.size(); ++k) {
      audit.path_distribution.mass[k] =
          static_cast<double>(audit.found[k]) / static_cast<double>(audit.found_total);
    }
  }
  audit.city_distribution = city_distribution(city, attribute);
  const auto& totals = city.category_totals(a);
  audit.utility.assign(totals.size(), 0.0);
  for (std::size_t k = 0; k < totals.size(); ++k) {
    if (totals[k] > 0) {
      audit.utility[k] = static_cast<double>(audit.found[k]) / static_cast<double>(totals[k]);
    }
  }
  return audit;
}

double unfairness(const CityMap& city, const Path& path, const FairnessSpec& spec,
                  int sensor_radius) {
  if (auto defect = path_defect(city, path)) throw ValidationError("invalid path: " + *defect);
  Evaluator evaluator(city, spec, sensor_radius);
  return evaluator.evaluate(path).unfairness;
}

// Evaluator ------------------------------------------------------------------

Evaluator::Evaluator(const CityMap& city, FairnessSpec spec, int sensor_radius)
    : city_(&city), spec_(std::move(spec)), radius_(sensor_radius) {
  if (sensor_radius < 0) throw ValidationError("sensor radius must be non-negative");
  validate_spec(city, spec_);
  attribute_ = efficiency_attribute(city, spec_);
  switch (spec_.kind) {
    case SpecKind::DemographicParity:
      reference_ = city_distribution(city, city.attributes()[attribute_].name).mass;
      break;
    case SpecKind::AffirmativeAction:
    case SpecKind::LocationTarget:
      reference_ = spec_.target;
      break;
    default:
      break;
  }
  stamp_.assign(city.cell_count(), 0);
}

void Evaluator::cover(const Path& path, std::vector<std::size_t>& covered) {
  covered.clear();
  if (++epoch_ == 0) {
    std::fill(stamp_.begin(), stamp_.end(), 0);
    epoch_ = 1;
  }
  for (Coord c : path.steps) {
    for (int dy = -radius_; dy <= radius_; ++dy) {
      for (int dx = -radius_; dx <= radius_; ++dx) {
        const Coord n{c.x + dx, c.y + dy};
        if (!city_->traversable(n)) continue;
        const std::size_t i = city_->index(n);
        if (stamp_[i] != epoch_) {
          stamp_[i] = epoch_;
          covered.push_back(i);
        }
      }
    }
  }
  std::sort(covered.begin(), covered.end());
}

Evaluator::Score Evaluator::evaluate(const Path& path) { return evaluate(path, scratch_); }

Evaluator::Score Evaluator::evaluate(const Path& path, std::vector<std::size_t>& covered) {
  cover(path, covered);
  const auto& categories = city_->attributes()[attribute_].categories;
  std::vector<std::int64_t> found(categories.size(), 0);
  for (std::size_t i : covered) {
    const auto& counts = city_->cells()[i].counts[attribute_];
    for (std::size_t k = 0; k < counts.size(); ++k) found[k] += counts[k];
  }

  Score score;
  score.efficiency = std::accumulate(found.begin(), found.end(), std::int64_t{0});

  switch (spec_.kind) {
    case SpecKind::DemographicParity:
      score.unfairness = city_->population(attribute_) == 0 ? 1.0 : shares_distance(found, reference_);
      break;
    case SpecKind::AffirmativeAction:
      score.unfairness = shares_distance(found, reference_);
      break;
    case SpecKind::RawlsianGroups: {
      const auto& totals = city_->category_totals(attribute_);
      std::optional<double> worst;
      for (std::size_t k = 0; k < totals.size(); ++k) {
        if (totals[k] == 0) continue;
        const double utility = static_cast<double>(found[k]) / static_cast<double>(totals[k]);
        worst = worst ? std::min(*worst, utility) : utility;
      }
      score.unfairness = worst ? -*worst : 0.0;
      break;
    }
    case SpecKind::RawlsianLocations: {
      const auto visits = region_visits(*city_, path);
      score.unfairness = -static_cast<double>(*std::min_element(visits.begin(), visits.end()));
      break;
    }
    case SpecKind::LocationTarget:
      score.unfairness = shares_distance(region_visits(*city_, path), reference_);
      break;
  }
  return score;
}

}  // namespace fairnav
