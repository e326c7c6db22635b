#include <map>
#include <unordered_map>

#include "fairnav/error.hpp"
#include "fairnav/planner.hpp"

namespace fairnav {

namespace {

constexpr Coord kAscendingNeighbours[4] = {{-1, 0}, {0, -1}, {0, 1}, {1, 0}};

// Depth-first enumeration of closed walks from the base. Children are
// expanded in ascending coordinate order, so walks are produced in
// lexicographic order and the first walk recorded for a visited set is the
// preferred one among equally short walks.
class TourEnumerator {
 public:
  TourEnumerator(const CityMap& city, int budget) : city_(city), budget_(budget), router_(city, budget) {}

  // Shortest (then lexicographically smallest) closed walk per visited set.
  std::map<std::uint32_t, Path> run() {
    path_.steps = {city_.base()};
    dfs(city_.base(), bit(city_.base()), 0);
    return std::move(best_);
  }

 private:
  std::uint32_t bit(Coord c) const { return std::uint32_t{1} << city_.index(c); }

  void dfs(Coord cell, std::uint32_t visited, int moves) {
    const std::uint64_t key = (std::uint64_t{visited} << 5) | city_.index(cell);
    auto [it, inserted] = reached_.try_emplace(key, moves);
    if (!inserted) {
      if (it->second <= moves) return;
      it->second = moves;
    }
    if (cell == city_.base()) {
      auto found = best_.find(visited);
      if (found == best_.end() || found->second.steps.size() > path_.steps.size()) {
        best_[visited] = path_;
      }
    }
    for (Coord off : kAscendingNeighbours) {
      const Coord next{cell.x + off.x, cell.y + off.y};
      if (!router_.in_arena(next)) continue;
      if (moves + 1 + router_.distance_to_base(next) > budget_) continue;
      path_.steps.push_back(next);
      dfs(next, visited | bit(next), moves + 1);
      path_.steps.pop_back();
    }
  }

  const CityMap& city_;
  int budget_;
  Router router_;
  Path path_;
  std::unordered_map<std::uint64_t, int> reached_;
  std::map<std::uint32_t, Path> best_;
};

}  // namespace

ParetoFront oracle_pareto(const CityMap& city, const FairnessSpec& spec, int budget,
                          int sensor_radius) {
  if (city.width() > kOracleMaxSide || city.height() > kOracleMaxSide || budget > kOracleMaxBudget) {
    throw GuardLimitError("oracle is limited to maps up to " + std::to_string(kOracleMaxSide) + "x" +
                          std::to_string(kOracleMaxSide) + " and budgets up to " +
                          std::to_string(kOracleMaxBudget) + " (got " + std::to_string(city.width()) +
                          "x" + std::to_string(city.height()) + ", budget " + std::to_string(budget) +
                          ")");
  }
  if (budget < 0) throw ValidationError("budget must be non-negative");
  if (!is_group_spec(spec.kind)) {
    throw UnsupportedSpecError("oracle deduplicates tours by covered cells, which does not determine " +
                               std::string(to_string(spec.kind)));
  }
  Evaluator evaluator(city, spec, sensor_radius);

  TourEnumerator enumerator(city, budget);
  // Tours with the same covered set score identically; keep the preferred one.
  std::map<std::vector<std::size_t>, Path> by_coverage;
  std::vector<std::size_t> covered;
  for (auto& [visited, path] : enumerator.run()) {
    covered = covered_cells(city, path.steps, sensor_radius);
    auto [it, inserted] = by_coverage.try_emplace(covered, path);
    if (!inserted) {
      const Path& held = it->second;
      if (path.steps.size() < held.steps.size() ||
          (path.steps.size() == held.steps.size() && path.steps < held.steps)) {
        it->second = path;
      }
    }
  }

  std::vector<Solution> solutions;
  solutions.reserve(by_coverage.size());
  for (auto& [cells, path] : by_coverage) {
    const auto score = evaluator.evaluate(path);
    solutions.push_back({path, score.efficiency, score.unfairness});
  }
  return make_front(std::move(solutions));
}

}  // namespace fairnav
