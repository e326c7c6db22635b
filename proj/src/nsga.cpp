#include <algorithm>
#include <limits>
#include <numeric>

#include "fairnav/error.hpp"
#include "fairnav/planner.hpp"
#include "rng.hpp"

namespace fairnav {

namespace {

struct Individual {
  std::vector<Coord> genome;
  Solution solution;
  int rank = 0;
  double crowding = 0.0;
};

bool same_objectives(const Solution& a, const Solution& b) {
  return a.efficiency == b.efficiency && a.unfairness == b.unfairness;
}

// Assigns rank and crowding distance to every individual. Individuals that
// repeat an objective vector already present are ranked after every
// distinct one, which keeps clones from crowding out the population.
void rank_population(std::vector<Individual>& pool) {
  const std::size_t n = pool.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const Solution& sa = pool[a].solution;
    const Solution& sb = pool[b].solution;
    if (sa.unfairness != sb.unfairness) return sa.unfairness < sb.unfairness;
    if (sa.efficiency != sb.efficiency) return sa.efficiency > sb.efficiency;
    return a < b;
  });
  std::vector<std::size_t> distinct;
  std::vector<std::size_t> clones;
  for (std::size_t k = 0; k < n; ++k) {
    if (k > 0 && same_objectives(pool[order[k]].solution, pool[order[k - 1]].solution)) {
      clones.push_back(order[k]);
    } else {
      distinct.push_back(order[k]);
    }
  }

  // Fast non-dominated sort over the distinct individuals.
  const std::size_t m = distinct.size();
  std::vector<std::vector<std::size_t>> dominated(m);
  std::vector<int> domination_count(m, 0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      const Solution& a = pool[distinct[i]].solution;
      const Solution& b = pool[distinct[j]].solution;
      if (dominates(a, b)) {
        dominated[i].push_back(j);
        ++domination_count[j];
      } else if (dominates(b, a)) {
        dominated[j].push_back(i);
        ++domination_count[i];
      }
    }
  }
  std::vector<std::vector<std::size_t>> fronts;
  std::vector<std::size_t> current;
  for (std::size_t i = 0; i < m; ++i) {
    if (domination_count[i] == 0) current.push_back(i);
  }
  while (!current.empty()) {
    std::vector<std::size_t> next;
    for (std::size_t i : current) {
      for (std::size_t j : dominated[i]) {
        if (--domination_count[j] == 0) next.push_back(j);
      }
    }
    std::vector<std::size_t> members;
    for (std::size_t i : current) members.push_back(distinct[i]);
    fronts.push_back(std::move(members));
    current = std::move(next);
  }
  if (!clones.empty()) fronts.push_back(clones);

  for (std::size_t r = 0; r < fronts.size(); ++r) {
    auto& front = fronts[r];
    for (std::size_t i : front) {
      pool[i].rank = static_cast<int>(r);
      pool[i].crowding = 0.0;
    }
    if (front.size() <= 2) {
      for (std::size_t i : front) pool[i].crowding = std::numeric_limits<double>::infinity();
      continue;
    }
    auto crowd = [&](auto objective) {
      std::vector<std::size_t> sorted = front;
      std::sort(sorted.begin(), sorted.end(), [&](std::size_t a, std::size_t b) {
        const double oa = objective(pool[a].solution);
        const double ob = objective(pool[b].solution);
        return oa != ob ? oa < ob : a < b;
      });
      const double lo = objective(pool[sorted.front()].solution);
      const double hi = objective(pool[sorted.back()].solution);
      pool[sorted.front()].crowding = std::numeric_limits<double>::infinity();
      pool[sorted.back()].crowding = std::numeric_limits<double>::infinity();
      if (hi <= lo) return;
      for (std::size_t k = 1; k + 1 < sorted.size(); ++k) {
        pool[sorted[k]].crowding += (objective(pool[sorted[k + 1]].solution) -
                                     objective(pool[sorted[k - 1]].solution)) /
                                    (hi - lo);
      }
    };
    crowd([](const Solution& s) { return -static_cast<double>(s.efficiency); });
    crowd([](const Solution& s) { return s.unfairness; });
  }
}

bool better(const Individual& a, std::size_t ia, const Individual& b, std::size_t ib) {
  if (a.rank != b.rank) return a.rank < b.rank;
  if (a.crowding != b.crowding) return a.crowding > b.crowding;
  return ia < ib;
}

class Nsga2 {
 public:
  Nsga2(const CityMap& city, const FairnessSpec& spec, const PlannerParams& params,
        const EvolveOptions& options)
      : params_(params),
        decoder_(city, params.budget, options.pinned),
        evaluator_(city, spec, params.sensor_radius),
        rng_(params.seed),
        max_genome_(std::max(1, params.budget)) {
    for (const Path& seed : options.seeds) {
      Individual ind = make(genome_of(seed));
      seeds_.push_back(std::move(ind));
    }
    inject_seeds_ = !decoder_.pinned().empty();
  }

  ParetoFront run() {
    const auto n = static_cast<std::size_t>(params_.population_size);
    std::vector<Individual> population;
    if (inject_seeds_) {
      for (std::size_t i = 0; i < seeds_.size() && population.size() < n; ++i) {
        population.push_back(seeds_[i]);
      }
    }
    while (population.size() < n) population.push_back(make(random_genome()));
    remember(population);
    rank_population(population);

    for (int gen = 0; gen < params_.generations; ++gen) {
      std::vector<Individual> offspring;
      offspring.reserve(n);
      while (offspring.size() < n) {
        std::vector<Coord> a = population[tournament(population)].genome;
        std::vector<Coord> b = population[tournament(population)].genome;
        if (rng_.chance(params_.crossover_rate)) crossover(a, b);
        mutate(a);
        mutate(b);
        offspring.push_back(make(std::move(a)));
        offspring.push_back(make(std::move(b)));
      }
      remember(offspring);

      std::vector<Individual> pool = std::move(population);
      pool.insert(pool.end(), std::make_move_iterator(offspring.begin()),
                  std::make_move_iterator(offspring.end()));
      rank_population(pool);
      std::vector<std::size_t> order(pool.size());
      std::iota(order.begin(), order.end(), 0);
      std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return better(pool[a], a, pool[b], b);
      });
      population.clear();
      for (std::size_t k = 0; k < n; ++k) population.push_back(std::move(pool[order[k]]));
      // Crowding of a truncated front is stale; re-rank for the next tournament.
      rank_population(population);
    }

    std::vector<Solution> finals = std::move(archive_.solutions);
    for (const auto& s : seeds_) finals.push_back(s.solution);
    return make_front(std::move(finals));
  }

 private:
  Individual make(std::vector<Coord> genome) {
    Individual ind;
    ind.solution.path = decoder_.decode(genome);
    const auto score = evaluator_.evaluate(ind.solution.path);
    ind.solution.efficiency = score.efficiency;
    ind.solution.unfairness = score.unfairness;
    ind.genome = std::move(genome);
    return ind;
  }

  void remember(const std::vector<Individual>& batch) {
    std::vector<Solution> candidates = std::move(archive_.solutions);
    for (const auto& ind : batch) candidates.push_back(ind.solution);
    archive_ = make_front(std::move(candidates));
  }

  std::size_t tournament(const std::vector<Individual>& population) {
    const std::size_t a = rng_.below(population.size());
    const std::size_t b = rng_.below(population.size());
    return better(population[a], a, population[b], b) ? a : b;
  }

  Coord random_cell() {
    const auto& arena = decoder_.router().arena();
    return arena[rng_.below(arena.size())];
  }

  Coord random_near(Coord c, int radius) {
    Router& router = decoder_.router();
    for (int attempt = 0; attempt < 16; ++attempt) {
      const Coord n{c.x + rng_.below(2 * radius + 1) - radius, c.y + rng_.below(2 * radius + 1) - radius};
      if (n != c && router.in_arena(n)) return n;
    }
    return c;
  }

  std::vector<Coord> random_genome() {
    std::vector<Coord> genome;
    if (rng_.chance(0.5)) {
      const int count = 1 + rng_.below(std::clamp(params_.budget / 4, 1, 16));
      for (int i = 0; i < count; ++i) genome.push_back(random_cell());
    } else {
      // A random walk from the base explores compact tours near home.
      Router& router = decoder_.router();
      Coord cur = router.city().base();
      const int steps = 1 + rng_.below(max_genome_);
      for (int i = 0; i < steps; ++i) {
        const Coord next = random_near(cur, 1);
        if (next == cur || manhattan(next, cur) != 1) continue;
        cur = next;
        genome.push_back(cur);
      }
    }
    return genome;
  }

  void crossover(std::vector<Coord>& a, std::vector<Coord>& b) {
    const std::size_t i = rng_.below(a.size() + 1);
    const std::size_t j = rng_.below(b.size() + 1);
    std::vector<Coord> c(a.begin(), a.begin() + i);
    c.insert(c.end(), b.begin() + j, b.end());
    std::vector<Coord> d(b.begin(), b.begin() + j);
    d.insert(d.end(), a.begin() + i, a.end());
    if (c.size() > max_genome_) c.resize(max_genome_);
    if (d.size() > max_genome_) d.resize(max_genome_);
    a = std::move(c);
    b = std::move(d);
  }

  void mutate(std::vector<Coord>& genome) {
    if (!rng_.chance(params_.mutation_rate)) return;
    enum { kPerturb, kInsert, kDelete };
    int op = rng_.below(3);
    if (genome.empty()) op = kInsert;
    if (op == kInsert && genome.size() >= max_genome_) op = kPerturb;

    switch (op) {
      case kPerturb: {
        // Half the time the tour is first spelled out cell by cell, so a
        // nudge reshapes the route locally instead of moving a whole leg.
        if (rng_.chance(0.5)) {
          std::vector<Coord> cells = genome_of(decoder_.decode(genome));
          if (cells.empty()) break;
          genome = std::move(cells);
          const std::size_t i = rng_.below(genome.size());
          genome[i] = random_near(genome[i], 1);
          break;
        }
        const std::size_t i = rng_.below(genome.size());
        genome[i] = random_near(genome[i], 1 + rng_.below(3));
        break;
      }
      case kInsert: {
        const std::size_t pos = rng_.below(genome.size() + 1);
        Coord cell = !genome.empty() && rng_.chance(0.5)
                         ? random_near(genome[rng_.below(genome.size())], 2)
                         : random_cell();
        genome.insert(genome.begin() + static_cast<std::ptrdiff_t>(pos), cell);
        break;
      }
      case kDelete:
        genome.erase(genome.begin() + static_cast<std::ptrdiff_t>(rng_.below(genome.size())));
        break;
    }
  }

  PlannerParams params_;
  TourDecoder decoder_;
  Evaluator evaluator_;
  detail::Rng rng_;
  std::size_t max_genome_;
  std::vector<Individual> seeds_;
  bool inject_seeds_ = false;
  ParetoFront archive_;
};

}  // namespace

ParetoFront evolve_pareto(const CityMap& city, const FairnessSpec& spec,
                          const PlannerParams& params, const EvolveOptions& options) {
  validate_params(params);
  Nsga2 search(city, spec, params, options);
  return search.run();
}

ParetoFront refine(const CityMap& city, const FairnessSpec& spec, const PlannerParams& params,
                   const std::vector<Coord>& waypoints, const ParetoFront& previous) {
  EvolveOptions options;
  options.pinned = waypoints;
  for (const auto& s : previous.solutions) {
    if (auto defect = path_defect(city, s.path)) {
      throw ValidationError("previous front holds an invalid path: " + *defect);
    }
    options.seeds.push_back(s.path);
  }
  return evolve_pareto(city, spec, params, options);
}

}  // namespace fairnav
