#include "cities.hpp"
#include "doctest.h"
#include "fairnav/error.hpp"
#include "fairnav/io.hpp"

using namespace fairnav;

TEST_CASE("spec wire form") {
  const FairnessSpec aa{SpecKind::AffirmativeAction, "age", {0.5, 0.5}};
  CHECK(to_json(aa).dump() == R"({"kind":"affirmative_action","attribute":"age","target":[0.5,0.5]})");
  CHECK(spec_from_json(to_json(aa)) == aa);
  CHECK(parse_spec(R"({"kind":"rawlsian_locations"})").kind == SpecKind::RawlsianLocations);
  CHECK_THROWS_AS(parse_spec(R"({"attribute":"age"})"), ParseError);
  CHECK_THROWS_AS(parse_spec(R"({"kind":"demographic_parity","target":["x"]})"), ParseError);
  CHECK_THROWS_AS(parse_spec("[]"), ParseError);
  CHECK_THROWS_AS(parse_spec("not json"), ParseError);
}

TEST_CASE("params") {
  PlannerParams p;
  p.seed = 18446744073709551615ULL;
  p.budget = 12;
  p.mutation_rate = 0.25;
  CHECK(params_from_json(to_json(p)) == p);
  CHECK(params_from_json(Json()) == PlannerParams{});
  const PlannerParams partial = params_from_json(Json{{"budget", 9}});
  CHECK(partial.budget == 9);
  CHECK(partial.population_size == 128);
  CHECK_THROWS_AS(params_from_json(Json{{"seed", -1}}), ParseError);
  CHECK_THROWS_AS(params_from_json(Json{{"budget", "ten"}}), ParseError);
  CHECK_THROWS_AS(params_from_json(Json::array()), ParseError);
}

TEST_CASE("front documents") {
  const FairnessSpec spec{SpecKind::DemographicParity, "g", {}};
  ParetoFront front;
  front.solutions.push_back({Path{{{0, 0}}}, 3, 0.1234567890123456789});
  front.solutions.push_back({Path{{{0, 0}, {1, 0}, {0, 0}}}, 7, 2.0 / 3.0});
  const Json doc = front_document(spec, to_json(PlannerParams{}), front);
  CHECK(doc["format"] == "fairnav-front/1");
  CHECK(doc["solutions"][1]["path"].dump() == "[[0,0],[1,0],[0,0]]");

  const std::string text = dump_document(doc);
  CHECK(text.back() == '\n');
  const FrontDocument back = parse_front_document(text);
  CHECK(back.front == front);
  CHECK(back.spec == spec);
  CHECK(dump_document(front_document(back.spec, back.params, back.front)) == text);

  SUBCASE("a solution document reads as a one-point front") {
    const Json sol = solution_document(spec, Json{{"budget", 4}}, 0.5, front.solutions[1]);
    const FrontDocument one = parse_front_document(sol.dump());
    REQUIRE(one.front.solutions.size() == 1);
    CHECK(one.front.solutions[0] == front.solutions[1]);
  }

  SUBCASE("errors name the field") {
    Json broken = doc;
    broken["solutions"][1]["path"][1] = Json::array({1});
    try {
      parse_front_document(broken.dump());
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(std::string(e.what()).find("solutions[1].path[1]") != std::string::npos);
    }
    Json wrong = doc;
    wrong["format"] = "something-else";
    CHECK_THROWS_AS(parse_front_document(wrong.dump()), ParseError);
  }
}

TEST_CASE("waypoints") {
  CHECK(waypoints_from_json(Json::parse("[[1,2],[3,4]]")) == std::vector<Coord>{{1, 2}, {3, 4}});
  CHECK(waypoints_from_json(Json::array()).empty());
  CHECK_THROWS_AS(waypoints_from_json(Json::parse("[[1]]")), ParseError);
  CHECK_THROWS_AS(waypoints_from_json(Json::parse("{}")), ParseError);
}

TEST_CASE("audit json") {
  const CityMap city = fairnav::testing::make_city(2, 1, {0, 0}, {{3, 1}, {0, 4}}, {"young", "old"});
  PathAudit audit = path_audit(city, Path{{{0, 0}}}, "g");
  audit.unfairness = 0.5;
  const Json j = to_json(audit, city.attributes()[0].categories);
  CHECK(j["categories"].dump() == R"(["young","old"])");
  CHECK(j["found"].dump() == "[3,1]");
  CHECK(j["path_distribution"].dump() == "[0.75,0.25]");
  CHECK(j["unfairness"] == 0.5);
}
