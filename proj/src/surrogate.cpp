#include <algorithm>
#include <cmath>

#include "fairnav/error.hpp"
#include "fairnav/planner.hpp"

namespace fairnav {

namespace {

// Per-cell reward of the cumulative-cost surrogate. Population counts
// positively; every person in a cell whose own shares deviate from the
// target (in L1) is discounted by weight * deviation.
std::vector<double> cell_rewards(const CityMap& city, std::size_t attribute,
                                 const std::vector<double>& target, double weight) {
  std::vector<double> rewards(city.cell_count(), 0.0);
  for (std::size_t i = 0; i < city.cell_count(); ++i) {
    const std::int64_t pop = city.cell_population(attribute, i);
    if (pop == 0 || !city.cells()[i].traversable) continue;
    const auto& counts = city.cells()[i].counts[attribute];
    double l1 = 0.0;
    for (std::size_t k = 0; k < counts.size(); ++k) {
      const double share = static_cast<double>(counts[k]) / static_cast<double>(pop);
      l1 += std::fabs(share - (k < target.size() ? target[k] : 0.0));
    }
    rewards[i] = static_cast<double>(pop) * (1.0 - weight * l1);
  }
  return rewards;
}

class InsertionPlanner {
 public:
  InsertionPlanner(const CityMap& city, int budget, int radius, std::vector<double> rewards)
      : city_(city), decoder_(city, budget), budget_(budget), radius_(radius),
        rewards_(std::move(rewards)) {}

  std::vector<Coord> plan() {
    std::vector<Coord> candidates;
    for (Coord c : decoder_.router().arena()) {
      if (rewards_[city_.index(c)] > 0.0) candidates.push_back(c);
    }
    tour_.clear();
    length_ = 0;
    reward_ = score(tour_);
    for (int round = 0; round < 4 * budget_ + 8; ++round) {
      if (!insert_best(candidates)) break;
      two_opt();
    }
    return tour_;
  }

 private:
  double score(const std::vector<Coord>& tour) {
    const Path path = decoder_.decode(tour);
    double total = 0.0;
    for (std::size_t i : covered_cells(city_, path.steps, radius_)) total += rewards_[i];
    return total;
  }

  int length(const std::vector<Coord>& tour) {
    Router& router = decoder_.router();
    if (tour.empty()) return 0;
    int total = router.distance_to_base(tour.front()) + router.distance_to_base(tour.back());
    for (std::size_t i = 1; i < tour.size(); ++i) total += router.distance(tour[i - 1], tour[i]);
    return total;
  }

  bool insert_best(const std::vector<Coord>& candidates) {
    Router& router = decoder_.router();
    const Coord base = city_.base();
    double best_ratio = 0.0;
    std::vector<Coord> best_tour;
    int best_length = 0;
    double best_reward = 0.0;
    for (Coord c : candidates) {
      for (std::size_t pos = 0; pos <= tour_.size(); ++pos) {
        const Coord prev = pos == 0 ? base : tour_[pos - 1];
        const Coord next = pos == tour_.size() ? base : tour_[pos];
        const int added = router.distance(prev, c) + router.distance(c, next) - router.distance(prev, next);
        if (length_ + added > budget_) continue;
        std::vector<Coord> candidate = tour_;
        candidate.insert(candidate.begin() + static_cast<std::ptrdiff_t>(pos), c);
        const double reward = score(candidate);
        const double gain = reward - reward_;
        if (gain <= 1e-9) continue;
        const double ratio = gain / std::max(added, 1);
        if (ratio > best_ratio) {
          best_ratio = ratio;
          best_tour = std::move(candidate);
          best_length = length_ + added;
          best_reward = reward;
        }
      }
    }
    if (best_tour.empty()) return false;
    tour_ = std::move(best_tour);
    length_ = best_length;
    reward_ = best_reward;
    return true;
  }

  void two_opt() {
    for (bool improved = true; improved;) {
      improved = false;
      for (std::size_t i = 0; i + 1 < tour_.size(); ++i) {
        for (std::size_t j = i + 1; j < tour_.size(); ++j) {
          std::vector<Coord> candidate = tour_;
          std::reverse(candidate.begin() + static_cast<std::ptrdiff_t>(i),
                       candidate.begin() + static_cast<std::ptrdiff_t>(j) + 1);
          const int len = length(candidate);
          if (len >= length_) continue;
          const double reward = score(candidate);
          if (reward < reward_) continue;
          tour_ = std::move(candidate);
          length_ = len;
          reward_ = reward;
          improved = true;
        }
      }
    }
  }

  const CityMap& city_;
  TourDecoder decoder_;
  int budget_;
  int radius_;
  std::vector<double> rewards_;
  std::vector<Coord> tour_;
  int length_ = 0;
  double reward_ = 0.0;
};

}  // namespace

Solution surrogate_plan(const CityMap& city, const FairnessSpec& spec, const PlannerParams& params,
                        double weight) {
  if (spec.kind != SpecKind::DemographicParity && spec.kind != SpecKind::AffirmativeAction) {
    throw UnsupportedSpecError("surrogate planning needs a distribution over groups; " +
                               std::string(to_string(spec.kind)) +
                               " has no per-cell decomposition");
  }
  if (!std::isfinite(weight) || weight < 0.0) {
    throw ValidationError("surrogate weight must be a finite non-negative number");
  }
  if (params.budget < 0) throw ValidationError("budget must be non-negative");
  Evaluator evaluator(city, spec, params.sensor_radius);

  InsertionPlanner planner(city, params.budget, params.sensor_radius,
                           cell_rewards(city, evaluator.attribute(), evaluator.reference(), weight));
  const std::vector<Coord> tour = planner.plan();

  TourDecoder decoder(city, params.budget);
  Solution solution;
  solution.path = decoder.decode(tour);
  const auto score = evaluator.evaluate(solution.path);
  solution.efficiency = score.efficiency;
  solution.unfairness = score.unfairness;
  return solution;
}

}  // namespace fairnav
