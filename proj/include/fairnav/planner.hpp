#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "fairnav/citymap.hpp"
#include "fairnav/fairness.hpp"
#include "fairnav/grid.hpp"

namespace fairnav {

struct PlannerParams {
  int population_size = 128;
  int generations = 300;
  double mutation_rate = 0.4;
  double crossover_rate = 0.8;
  std::uint64_t seed = 1;
  /// Maximum number of moves of a tour.
  int budget = 40;
  int sensor_radius = 0;

  bool operator==(const PlannerParams&) const = default;
};

/// Throws ValidationError describing the first invalid field.
void validate_params(const PlannerParams& params);

struct Solution {
  Path path;
  std::int64_t efficiency = 0;
  double unfairness = 1.0;

  bool operator==(const Solution&) const = default;
};

/// Mutually non-dominated solutions sorted by increasing unfairness (and so
/// by increasing efficiency).
struct ParetoFront {
  std::vector<Solution> solutions;

  bool operator==(const ParetoFront&) const = default;
};

/// a is at least as efficient and at most as unfair as b.
bool weakly_dominates(const Solution& a, const Solution& b);
/// Weak dominance with at least one strict inequality.
bool dominates(const Solution& a, const Solution& b);

/// Non-dominated filter. Identical objective vectors keep the shorter path,
/// then the lexicographically smaller one.
ParetoFront make_front(std::vector<Solution> candidates);

/// Path invariants including the move budget.
std::optional<std::string> path_defect(const CityMap& city, const Path& path, int budget);

// Routing --------------------------------------------------------------------

/// Shortest 4-connected routes inside the arena: the traversable cells a
/// closed tour of `budget` moves can reach. Distance fields are computed on
/// demand and cached, so a Router belongs to one thread.
class Router {
 public:
  Router(const CityMap& city, int budget);

  const CityMap& city() const { return *city_; }
  int budget() const { return budget_; }
  bool in_arena(Coord c) const;
  /// Arena cells in ascending coordinate order.
  const std::vector<Coord>& arena() const { return arena_; }
  int distance_to_base(Coord c) const;
  int distance(Coord from, Coord to);
  /// Next cell on a shortest route; `from` itself when already there.
  Coord step_toward(Coord from, Coord to);

 private:
  const std::vector<int>& field(int target);
  std::vector<int> bfs(int source) const;

  const CityMap* city_;
  int budget_;
  std::vector<Coord> arena_;
  std::vector<int> arena_index_;  // per map cell, -1 outside the arena
  std::vector<int> base_field_;   // per arena cell
  std::unordered_map<int, std::vector<int>> fields_;
};

/// Expands waypoint genomes into feasible closed tours: base, then each
/// waypoint in order along shortest routes, then back to base. A step that
/// would leave too little budget for the rest of the pinned waypoints and
/// the return trip is not taken; the walker visits the next pinned
/// waypoint instead, or returns home once none remain.
class TourDecoder {
 public:
  /// Throws ValidationError for off-map or blocked pins and InfeasibleError
  /// when no tour within budget visits all of them.
  TourDecoder(const CityMap& city, int budget, std::vector<Coord> pinned = {});

  Path decode(std::span<const Coord> waypoints);

  /// Pinned waypoints in visiting order (base and duplicates removed).
  const std::vector<Coord>& pinned() const { return pinned_; }
  /// Moves needed to visit all pins and return, starting from the base.
  int pinned_tour_length() const { return pinned_length_; }
  Router& router() { return router_; }

 private:
  int reserve(Coord c, std::size_t next_pin);

  Router router_;
  std::vector<Coord> pinned_;
  std::vector<int> pinned_tail_;
  int pinned_length_ = 0;
};

/// Genome reproducing a valid tour exactly when decoded: its interior cells.
std::vector<Coord> genome_of(const Path& path);

// Planners -------------------------------------------------------------------

struct EvolveOptions {
  /// Waypoints every returned tour must visit.
  std::vector<Coord> pinned;
  /// Tours of an earlier front. They are re-routed through the pins and
  /// always compete in the final front; when pins are present they also
  /// seed the initial population.
  std::vector<Path> seeds;
};

/// NSGA-II over waypoint genomes. Deterministic for a fixed seed.
ParetoFront evolve_pareto(const CityMap& city, const FairnessSpec& spec,
                          const PlannerParams& params, const EvolveOptions& options = {});

/// Re-plans through pinned waypoints, seeded from a previous front.
ParetoFront refine(const CityMap& city, const FairnessSpec& spec, const PlannerParams& params,
                   const std::vector<Coord>& waypoints, const ParetoFront& previous);

/// Markovian baseline: greedy best-insertion plus 2-opt on the per-cell
/// reward pop(c) * (1 - weight * L1(shares(c), target)). The result is
/// audited with the true unfairness of the spec.
Solution surrogate_plan(const CityMap& city, const FairnessSpec& spec,
                        const PlannerParams& params, double weight);

inline constexpr int kOracleMaxSide = 5;
inline constexpr int kOracleMaxBudget = 12;

/// Exact front by exhaustive enumeration of closed tours. Refuses maps
/// larger than 5x5 or budgets above 12 with GuardLimitError.
ParetoFront oracle_pareto(const CityMap& city, const FairnessSpec& spec, int budget,
                          int sensor_radius = 0);

struct ReferencePoint {
  double efficiency = 0.0;
  double unfairness = 1.0;
};

/// Worst point for the spec's objective orientation: zero efficiency and
/// the largest unfairness the spec can produce.
ReferencePoint default_reference(const FairnessSpec& spec);

/// Area dominated by the front and bounded by the reference point.
double hypervolume(const ParetoFront& front, ReferencePoint reference);

}  // namespace fairnav
