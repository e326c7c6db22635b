#include <algorithm>
#include <cmath>

#include "fairnav/error.hpp"
#include "fairnav/planner.hpp"

namespace fairnav {

void validate_params(const PlannerParams& p) {
  if (p.population_size < 4 || p.population_size % 2 != 0) {
    throw ValidationError("population_size must be an even number >= 4");
  }
  if (p.generations < 1) throw ValidationError("generations must be >= 1");
  if (!(p.mutation_rate >= 0.0 && p.mutation_rate <= 1.0)) {
    throw ValidationError("mutation_rate must be in [0, 1]");
  }
  if (!(p.crossover_rate >= 0.0 && p.crossover_rate <= 1.0)) {
    throw ValidationError("crossover_rate must be in [0, 1]");
  }
  if (p.budget < 0) throw ValidationError("budget must be non-negative");
  if (p.sensor_radius < 0) throw ValidationError("sensor_radius must be non-negative");
}

bool weakly_dominates(const Solution& a, const Solution& b) {
  return a.efficiency >= b.efficiency && a.unfairness <= b.unfairness;
}

bool dominates(const Solution& a, const Solution& b) {
  return weakly_dominates(a, b) && (a.efficiency > b.efficiency || a.unfairness < b.unfairness);
}

ParetoFront make_front(std::vector<Solution> candidates) {
  std::sort(candidates.begin(), candidates.end(), [](const Solution& a, const Solution& b) {
    if (a.unfairness != b.unfairness) return a.unfairness < b.unfairness;
    if (a.efficiency != b.efficiency) return a.efficiency > b.efficiency;
    if (a.path.steps.size() != b.path.steps.size()) return a.path.steps.size() < b.path.steps.size();
    return a.path.steps < b.path.steps;
  });
  ParetoFront front;
  for (auto& s : candidates) {
    // Sorted by unfairness, so only a strictly higher efficiency survives.
    if (!front.solutions.empty() && s.efficiency <= front.solutions.back().efficiency) continue;
    front.solutions.push_back(std::move(s));
  }
  return front;
}

std::optional<std::string> path_defect(const CityMap& city, const Path& path, int budget) {
  if (auto defect = path_defect(city, path)) return defect;
  if (path.moves() > static_cast<std::size_t>(std::max(budget, 0))) {
    return "path has " + std::to_string(path.moves()) + " moves, budget is " + std::to_string(budget);
  }
  return std::nullopt;
}

ReferencePoint default_reference(const FairnessSpec& spec) {
  return {0.0, is_distribution_spec(spec.kind) ? 1.0 : 0.0};
}

double hypervolume(const ParetoFront& front, ReferencePoint reference) {
  std::vector<const Solution*> points;
  for (const auto& s : front.solutions) points.push_back(&s);
  std::sort(points.begin(), points.end(), [](const Solution* a, const Solution* b) {
    if (a->unfairness != b->unfairness) return a->unfairness < b->unfairness;
    return a->efficiency > b->efficiency;
  });
  // Sweep unfairness upwards; each strip is as wide as the best efficiency
  // reached so far.
  double volume = 0.0;
  double best = reference.efficiency;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double lower = points[i]->unfairness;
    if (lower >= reference.unfairness) break;
    best = std::max(best, static_cast<double>(points[i]->efficiency));
    const double upper =
        i + 1 < points.size() ? std::min(points[i + 1]->unfairness, reference.unfairness)
                              : reference.unfairness;
    volume += (upper - lower) * (best - reference.efficiency);
  }
  return volume;
}

}  // namespace fairnav
