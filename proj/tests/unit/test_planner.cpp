#include <algorithm>
#include <random>

#include "checker.hpp"
#include "cities.hpp"
#include "doctest.h"
#include "fairnav/error.hpp"
#include "fairnav/planner.hpp"

using namespace fairnav;
using fairnav::testing::check_tour;
using fairnav::testing::make_city;
using fairnav::testing::random_city;
using fairnav::testing::uniform_city;

namespace {

Solution point(std::int64_t efficiency, double unfairness, std::vector<Coord> steps = {{0, 0}}) {
  return Solution{Path{std::move(steps)}, efficiency, unfairness};
}

const FairnessSpec kParity{SpecKind::DemographicParity, "g", {}};

void check_front(const CityMap& city, const FairnessSpec& spec, const ParetoFront& front, int budget,
                 int radius = 0) {
  REQUIRE_FALSE(front.solutions.empty());
  for (std::size_t i = 0; i < front.solutions.size(); ++i) {
    const Solution& s = front.solutions[i];
    const auto defect = check_tour(city, s.path, budget);
    CHECK_MESSAGE(!defect, *defect);
    CHECK(s.efficiency == path_audit(city, s.path, spec.attribute, radius).found_total);
    CHECK(s.unfairness == unfairness(city, s.path, spec, radius));
    if (i > 0) {
      CHECK(front.solutions[i - 1].unfairness < s.unfairness);
      CHECK(front.solutions[i - 1].efficiency < s.efficiency);
    }
  }
}

// Objective vectors of the exact parity front, by enumerating every closed
// walk with no shared code beyond the city model.
std::vector<std::pair<std::int64_t, double>> brute_force_parity(const CityMap& city, int budget) {
  const auto& totals = city.category_totals(0);
  const double all = static_cast<double>(totals[0] + totals[1]);
  const std::vector<double> reference{totals[0] / all, totals[1] / all};
  std::vector<std::pair<std::int64_t, double>> points;
  Path walk{{city.base()}};
  auto visit = [&](auto&& self) -> void {
    if (walk.steps.back() == city.base()) {
      const auto found = fairnav::testing::found_by_category(city, walk, 0);
      const std::int64_t total = found[0] + found[1];
      double unfair = 1.0;
      if (total > 0) {
        const std::vector<double> shares{static_cast<double>(found[0]) / total,
                                         static_cast<double>(found[1]) / total};
        unfair = fairnav::testing::jsd_entropy_form(shares, reference);
      }
      points.emplace_back(total, unfair);
    }
    if (static_cast<int>(walk.moves()) == budget) return;
    const Coord c = walk.steps.back();
    for (Coord n : {Coord{c.x - 1, c.y}, Coord{c.x + 1, c.y}, Coord{c.x, c.y - 1}, Coord{c.x, c.y + 1}}) {
      if (!city.traversable(n)) continue;
      walk.steps.push_back(n);
      self(self);
      walk.steps.pop_back();
    }
  };
  visit(visit);
  std::vector<std::pair<std::int64_t, double>> front;
  for (const auto& p : points) {
    bool dominated = false;
    for (const auto& q : points) {
      dominated = dominated || (q.first >= p.first && q.second <= p.second - 1e-12 ) ||
                  (q.first > p.first && q.second <= p.second + 1e-12);
    }
    if (!dominated) front.push_back(p);
  }
  std::sort(front.begin(), front.end());
  front.erase(std::unique(front.begin(), front.end(),
                          [](const auto& a, const auto& b) {
                            return a.first == b.first && std::abs(a.second - b.second) < 1e-12;
                          }),
              front.end());
  return front;
}

}  // namespace

TEST_CASE("params validation") {
  CHECK_NOTHROW(validate_params(PlannerParams{}));
  auto bad = [](auto tweak) {
    PlannerParams p;
    tweak(p);
    CHECK_THROWS_AS(validate_params(p), ValidationError);
  };
  bad([](PlannerParams& p) { p.population_size = 5; });
  bad([](PlannerParams& p) { p.population_size = 2; });
  bad([](PlannerParams& p) { p.mutation_rate = 1.5; });
  bad([](PlannerParams& p) { p.crossover_rate = -0.1; });
  bad([](PlannerParams& p) { p.generations = 0; });
  bad([](PlannerParams& p) { p.budget = -1; });
  bad([](PlannerParams& p) { p.sensor_radius = -1; });
}

TEST_CASE("dominance and fronts") {
  CHECK(dominates(point(5, 0.2), point(4, 0.2)));
  CHECK(dominates(point(5, 0.1), point(5, 0.2)));
  CHECK_FALSE(dominates(point(5, 0.2), point(5, 0.2)));
  CHECK(weakly_dominates(point(5, 0.2), point(5, 0.2)));
  CHECK_FALSE(weakly_dominates(point(6, 0.3), point(5, 0.2)));

  const ParetoFront front = make_front({point(3, 0.5), point(9, 0.9), point(1, 0.1), point(2, 0.6),
                                        point(9, 0.95)});
  REQUIRE(front.solutions.size() == 3);
  CHECK(front.solutions[0].efficiency == 1);
  CHECK(front.solutions[1].efficiency == 3);
  CHECK(front.solutions[2].efficiency == 9);

  SUBCASE("equal objectives keep the shorter, then the smaller path") {
    const auto longer = point(4, 0.3, {{0, 0}, {1, 0}, {0, 0}});
    const auto shorter = point(4, 0.3, {{0, 0}});
    const auto right = point(4, 0.3, {{0, 0}, {1, 0}, {0, 0}});
    const auto down = point(4, 0.3, {{0, 0}, {0, 1}, {0, 0}});
    CHECK(make_front({longer, shorter}).solutions == std::vector<Solution>{shorter});
    CHECK(make_front({shorter, longer}).solutions == std::vector<Solution>{shorter});
    CHECK(make_front({right, down}).solutions == std::vector<Solution>{down});
    CHECK(make_front({down, right}).solutions == std::vector<Solution>{down});
  }
}

TEST_CASE("hypervolume") {
  CHECK(hypervolume(ParetoFront{{point(4, 0.2)}}, {0.0, 1.0}) == doctest::Approx(3.2));
  CHECK(hypervolume(ParetoFront{}, {0.0, 1.0}) == 0.0);
  const ParetoFront two{{point(2, 0.1), point(5, 0.6)}};
  // 2 * 0.9 + (5 - 2) * 0.4
  CHECK(hypervolume(two, {0.0, 1.0}) == doctest::Approx(3.0));
  ParetoFront with_dominated = two;
  with_dominated.solutions.push_back(point(1, 0.5));
  CHECK(hypervolume(with_dominated, {0.0, 1.0}) == doctest::Approx(3.0));
  ParetoFront superset = two;
  superset.solutions.push_back(point(4, 0.3));
  CHECK(hypervolume(superset, {0.0, 1.0}) >= hypervolume(two, {0.0, 1.0}));

  CHECK(default_reference(kParity).unfairness == 1.0);
  const auto rawls = default_reference(FairnessSpec{SpecKind::RawlsianGroups, "g", {}});
  CHECK(rawls.unfairness == 0.0);
  CHECK(hypervolume(ParetoFront{{point(10, -0.5)}}, rawls) == doctest::Approx(5.0));
}

TEST_CASE("router") {
  // a wall with a gap at the bottom
  const CityMap city = make_city(5, 3, {0, 0}, {}, {"a", "b"}, {{2, 0}, {2, 1}});
  Router router(city, 100);
  CHECK(router.distance({0, 0}, {4, 0}) == 8);
  CHECK(router.distance_to_base({4, 0}) == 8);
  CHECK(router.distance({4, 0}, {4, 0}) == 0);
  CHECK(router.step_toward({0, 0}, {4, 0}) == Coord{0, 1});
  CHECK_FALSE(router.in_arena({2, 0}));

  Router small(city, 4);
  CHECK(small.in_arena({1, 1}));
  CHECK(small.in_arena({0, 2}));
  CHECK_FALSE(small.in_arena({1, 2}));
  CHECK(small.arena() == std::vector<Coord>{{0, 0}, {0, 1}, {0, 2}, {1, 0}, {1, 1}});
}

TEST_CASE("tour decoder") {
  std::mt19937_64 rng(3);

  SUBCASE("every genome decodes to a valid tour") {
    for (int trial = 0; trial < 300; ++trial) {
      const CityMap city = random_city(rng, 2 + static_cast<int>(rng() % 8), 2 + static_cast<int>(rng() % 8));
      const int budget = static_cast<int>(rng() % 20);
      TourDecoder decoder(city, budget);
      std::vector<Coord> genome;
      const int n = static_cast<int>(rng() % 10);
      for (int i = 0; i < n; ++i) {
        genome.push_back({static_cast<int>(rng() % 12) - 2, static_cast<int>(rng() % 12) - 2});
      }
      const Path path = decoder.decode(genome);
      const auto defect = check_tour(city, path, budget);
      CHECK_MESSAGE(!defect, *defect);
    }
  }

  SUBCASE("genome_of reproduces valid tours") {
    for (int trial = 0; trial < 300; ++trial) {
      const CityMap city = random_city(rng, 6, 6);
      const Path path = fairnav::testing::random_tour(city, rng, static_cast<int>(rng() % 10));
      TourDecoder decoder(city, static_cast<int>(path.moves()));
      CHECK(decoder.decode(genome_of(path)) == path);
    }
  }

  SUBCASE("empty genome is the base-only tour") {
    const CityMap city = uniform_city(3, 3, {1, 1});
    TourDecoder decoder(city, 6);
    CHECK(decoder.decode({}) == Path{{{1, 1}}});
  }

  SUBCASE("pinned waypoints") {
    const CityMap city = uniform_city(6, 6, {0, 0});
    TourDecoder decoder(city, 14, {{3, 2}, {0, 0}, {3, 2}});
    CHECK(decoder.pinned() == std::vector<Coord>{{3, 2}});
    CHECK(decoder.pinned_tour_length() == 10);
    for (int trial = 0; trial < 200; ++trial) {
      std::vector<Coord> genome;
      for (int i = 0; i < 6; ++i) genome.push_back({static_cast<int>(rng() % 6), static_cast<int>(rng() % 6)});
      const Path path = decoder.decode(genome);
      CHECK_FALSE(check_tour(city, path, 14));
      CHECK(std::find(path.steps.begin(), path.steps.end(), Coord{3, 2}) != path.steps.end());
    }

    CHECK_THROWS_AS(TourDecoder(city, 14, {{6, 0}}), ValidationError);
    const CityMap walled = make_city(3, 1, {0, 0}, {}, {"a", "b"}, {{1, 0}});
    CHECK_THROWS_AS(TourDecoder(walled, 4, {{1, 0}}), ValidationError);
    CHECK_THROWS_AS(TourDecoder(walled, 4, {{2, 0}}), InfeasibleError);
    try {
      TourDecoder(city, 10, {{5, 5}, {1, 1}});
      FAIL("expected an infeasibility error");
    } catch (const InfeasibleError& e) {
      CHECK(std::string(e.what()).find("(5,5)") != std::string::npos);
      CHECK(std::string(e.what()).find("(1,1)") == std::string::npos);
    }
    // each pin is reachable, but not both in one tour
    CHECK_THROWS_AS(TourDecoder(city, 10, {{5, 0}, {0, 5}}), InfeasibleError);
  }
}

TEST_CASE("evolve_pareto") {
  SUBCASE("3x3 uniform city, budget 2") {
    const CityMap city = uniform_city(3, 3, {1, 1});
    PlannerParams params;
    params.budget = 2;
    const ParetoFront front = evolve_pareto(city, kParity, params);
    REQUIRE(front.solutions.size() == 1);
    CHECK(front.solutions[0].path.moves() == 2);
    CHECK(front.solutions[0].efficiency == 4);
    CHECK(front == oracle_pareto(city, kParity, 2));
  }

  SUBCASE("budget 0 leaves only the base tour") {
    const CityMap city = uniform_city(4, 4, {2, 1});
    PlannerParams params;
    params.budget = 0;
    const ParetoFront front = evolve_pareto(city, kParity, params);
    REQUIRE(front.solutions.size() == 1);
    CHECK(front.solutions[0].path == Path{{{2, 1}}});
  }

  SUBCASE("valid, consistent and deterministic") {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 6; ++trial) {
      const CityMap city = random_city(rng, 7, 6);
      PlannerParams params;
      params.budget = 6 + static_cast<int>(rng() % 10);
      params.population_size = 32;
      params.generations = 40;
      params.seed = rng();
      params.sensor_radius = static_cast<int>(rng() % 2);
      for (const auto& spec : {kParity, FairnessSpec{SpecKind::AffirmativeAction, "g", {0.5, 0.5}},
                               FairnessSpec{SpecKind::RawlsianGroups, "g", {}}}) {
        const ParetoFront front = evolve_pareto(city, spec, params);
        check_front(city, spec, front, params.budget, params.sensor_radius);
        CHECK(evolve_pareto(city, spec, params) == front);
      }
    }
  }

  SUBCASE("biased-age trade-off") {
    const CityMap city = generate_city(synthetic_preset("biased-age", 16, 16), 1);
    const FairnessSpec spec{SpecKind::DemographicParity, "age", {}};
    PlannerParams params;
    params.budget = 40;
    const ParetoFront front = evolve_pareto(city, spec, params);
    check_front(city, spec, front, 40);
    CHECK(front.solutions.size() >= 5);
    CHECK(front.solutions.front().efficiency < front.solutions.back().efficiency);
    CHECK(front.solutions.front().unfairness > 0.0);
  }

  SUBCASE("location specs") {
    const CityMap city = make_city(4, 4, {0, 0}, std::vector<std::vector<std::int64_t>>(16, {1, 2}), {"a", "b"},
                                   {}, {Region{"near", {{0, 1}, {1, 0}}}, Region{"far", {{3, 3}, {3, 2}}}});
    PlannerParams params;
    params.budget = 12;
    params.generations = 60;
    const FairnessSpec spec{SpecKind::RawlsianLocations, "", {}};
    const ParetoFront front = evolve_pareto(city, spec, params);
    REQUIRE_FALSE(front.solutions.empty());
    CHECK(front.solutions.front().unfairness <= -1.0);
    for (const auto& s : front.solutions) CHECK_FALSE(check_tour(city, s.path, 12));
  }

  SUBCASE("errors") {
    const CityMap city = uniform_city(3, 3, {1, 1});
    PlannerParams params;
    params.population_size = 3;
    CHECK_THROWS_AS(evolve_pareto(city, kParity, params), ValidationError);
    CHECK_THROWS_AS(evolve_pareto(city, FairnessSpec{SpecKind::DemographicParity, "age", {}}, PlannerParams{}),
                    MismatchError);
  }
}

TEST_CASE("oracle") {
  SUBCASE("budget 0") {
    const CityMap city = uniform_city(3, 3, {1, 1});
    const ParetoFront front = oracle_pareto(city, kParity, 0);
    REQUIRE(front.solutions.size() == 1);
    CHECK(front.solutions[0].path == Path{{{1, 1}}});
  }

  SUBCASE("2x2 uniform city, budget 4") {
    const ParetoFront front = oracle_pareto(uniform_city(2, 2, {0, 0}), kParity, 4);
    REQUIRE(front.solutions.size() == 1);
    CHECK(front.solutions[0].efficiency == 8);
    CHECK(front.solutions[0].path.moves() == 4);
  }

  SUBCASE("guards") {
    CHECK_THROWS_AS(oracle_pareto(uniform_city(6, 5, {0, 0}), kParity, 4), GuardLimitError);
    CHECK_THROWS_AS(oracle_pareto(uniform_city(5, 5, {0, 0}), kParity, 13), InfeasibleError);
    CHECK_THROWS_AS(oracle_pareto(uniform_city(5, 5, {0, 0}), kParity, -1), ValidationError);
    try {
      oracle_pareto(uniform_city(16, 16, {0, 0}), kParity, 4);
    } catch (const GuardLimitError& e) {
      CHECK(std::string(e.what()).find("5x5") != std::string::npos);
    }
    const CityMap regions = make_city(2, 2, {0, 0}, {}, {"a", "b"}, {}, {Region{"r", {{1, 1}}}});
    CHECK_THROWS_AS(oracle_pareto(regions, FairnessSpec{SpecKind::RawlsianLocations, "", {}}, 4),
                    UnsupportedSpecError);
  }

  SUBCASE("matches brute-force enumeration") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 12; ++trial) {
      const CityMap city = random_city(rng, 2 + static_cast<int>(rng() % 2), 2 + static_cast<int>(rng() % 2), 9);
      const int budget = static_cast<int>(rng() % 9);
      const ParetoFront front = oracle_pareto(city, kParity, budget);
      check_front(city, kParity, front, budget);
      const auto expected = brute_force_parity(city, budget);
      REQUIRE(front.solutions.size() == expected.size());
      for (std::size_t i = 0; i < expected.size(); ++i) {
        CHECK(front.solutions[i].efficiency == expected[i].first);
        CHECK(front.solutions[i].unfairness == doctest::Approx(expected[i].second).epsilon(1e-9));
      }
    }
  }

  SUBCASE("more budget never lowers the best efficiency") {
    std::mt19937_64 rng(37);
    for (int trial = 0; trial < 5; ++trial) {
      const CityMap city = random_city(rng, 4, 4);
      std::int64_t best = -1;
      for (int budget = 0; budget <= 10; ++budget) {
        const auto front = oracle_pareto(city, kParity, budget);
        CHECK(front.solutions.back().efficiency >= best);
        best = front.solutions.back().efficiency;
      }
    }
  }

  SUBCASE("weakly dominates the evolutionary front") {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 5; ++trial) {
      const CityMap city = random_city(rng, 4, 4);
      for (const auto& spec : {kParity, FairnessSpec{SpecKind::RawlsianGroups, "g", {}}}) {
        PlannerParams params;
        params.budget = 8;
        params.generations = 60;
        const auto oracle = oracle_pareto(city, spec, 8);
        const auto evolved = evolve_pareto(city, spec, params);
        for (const auto& s : evolved.solutions) {
          CHECK(std::any_of(oracle.solutions.begin(), oracle.solutions.end(),
                            [&](const Solution& o) { return weakly_dominates(o, s); }));
        }
        const auto ref = default_reference(spec);
        const double ratio = hypervolume(evolved, ref) / hypervolume(oracle, ref);
        CHECK(ratio > 0.0);
        CHECK(ratio <= 1.0 + 1e-12);
      }
    }
  }
}

TEST_CASE("surrogate") {
  const CityMap biased = generate_city(synthetic_preset("biased-age", 10, 10), 2);
  const FairnessSpec spec{SpecKind::DemographicParity, "age", {}};
  PlannerParams params;
  params.budget = 16;

  SUBCASE("honest audit and valid tours") {
    for (double weight : {0.0, 0.5, 1.0, 2.0}) {
      const Solution s = surrogate_plan(biased, spec, params, weight);
      CHECK_FALSE(check_tour(biased, s.path, params.budget));
      CHECK(s.unfairness == unfairness(biased, s.path, spec));
      CHECK(s.efficiency == path_audit(biased, s.path, "age").found_total);
    }
  }

  SUBCASE("weight 0 beats the base-only tour") {
    const Solution s = surrogate_plan(biased, spec, params, 0.0);
    CHECK(s.efficiency >= path_audit(biased, Path{{biased.base()}}, "age").found_total);
    CHECK(s.efficiency > 0);
  }

  SUBCASE("uniform shares make the weight irrelevant") {
    const CityMap city = make_city(6, 6, {2, 2}, [] {
      std::vector<std::vector<std::int64_t>> counts;
      for (int i = 0; i < 36; ++i) counts.push_back({i % 5, i % 5});
      return counts;
    }());
    const FairnessSpec even{SpecKind::AffirmativeAction, "g", {0.5, 0.5}};
    const Solution base = surrogate_plan(city, even, params, 0.0);
    for (double weight : {0.5, 1.0, 2.0, 10.0}) CHECK(surrogate_plan(city, even, params, weight) == base);
  }

  SUBCASE("errors") {
    CHECK_THROWS_AS(surrogate_plan(biased, FairnessSpec{SpecKind::RawlsianGroups, "age", {}}, params, 1.0),
                    UnsupportedSpecError);
    CHECK_THROWS_AS(surrogate_plan(biased, spec, params, -1.0), ValidationError);
  }
}

TEST_CASE("refine") {
  const CityMap city = generate_city(synthetic_preset("biased-age", 16, 16), 1);
  const FairnessSpec spec{SpecKind::DemographicParity, "age", {}};
  PlannerParams params;
  params.budget = 40;
  params.generations = 100;
  const ParetoFront parent = evolve_pareto(city, spec, params);

  SUBCASE("no waypoints reproduces the parent") {
    const ParetoFront again = refine(city, spec, params, {}, parent);
    EvolveOptions options;
    for (const auto& s : parent.solutions) options.seeds.push_back(s.path);
    CHECK(again == evolve_pareto(city, spec, params, options));
    CHECK(again == parent);
    CHECK(refine(city, spec, params, {city.base()}, parent) == again);
  }

  SUBCASE("pinned far waypoint is on every tour") {
    const Coord pin{12, 12};
    const ParetoFront front = refine(city, spec, params, {pin}, parent);
    check_front(city, spec, front, params.budget);
    for (const auto& s : front.solutions) {
      CHECK(std::find(s.path.steps.begin(), s.path.steps.end(), pin) != s.path.steps.end());
    }
  }

  SUBCASE("errors") {
    CHECK_THROWS_AS(refine(city, spec, params, {{15, 15}, {15, 0}}, parent), InfeasibleError);
    CHECK_THROWS_AS(refine(city, spec, params, {{16, 0}}, parent), ValidationError);
    ParetoFront broken = parent;
    broken.solutions[0].path.steps.push_back({9, 9});
    CHECK_THROWS_AS(refine(city, spec, params, {}, broken), ValidationError);
  }
}
