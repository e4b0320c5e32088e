#include "doctest.h"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <string>

#include "crossroads/config.hpp"

using namespace crossroads;
using nlohmann::json;
using P = Population;

namespace {

bool mentions(const ConfigError& e, const std::string& what) {
  return std::any_of(e.offenses().begin(), e.offenses().end(),
                     [&](const std::string& o) { return o.find(what) != std::string::npos; });
}

ConfigError rejection(const json& j) {
  try {
    config_from_json(j);
  } catch (const ConfigError& e) {
    return e;
  }
  FAIL("config was accepted");
  return ConfigError({});
}

struct Row {
  const char* name;
  std::size_t cells;
  double eta_endo, eta_exo, cap_endo, cap_exo, radius_endo, radius_exo;
};

}  // namespace

TEST_CASE("built-in scenario parameters") {
  const Row table[] = {
      {"test1-macro", 100, 1, 35, 15, 50, 10, 20},
      {"test1-multiscale", 100, 1, 35, 15, 50, 10, 20},
      {"test2-mixed", 200, 7, 27, 20, 40, 5, 10},
      {"test2-micro", 200, 7, 27, 20, 40, 5, 10},
      {"test2-macro", 200, 7, 27, 20, 40, 5, 10},
  };
  for (const Row& r : table) {
    CAPTURE(r.name);
    const ScenarioConfig c = builtin_scenario(r.name);
    CHECK(c.cells == r.cells);
    CHECK(c.params.eta == PairTable::symmetric(r.eta_endo, r.eta_exo));
    CHECK(c.params.cap == PairTable::symmetric(r.cap_endo, r.cap_exo));
    CHECK(c.params.radius == PairTable::symmetric(r.radius_endo, r.radius_exo));
    CHECK(c.params.gamma == 1.0);
    CHECK(c.domain == reference_domain());
    CHECK(c.dt_max == 0.05);
    CHECK(c.injection_period == 0.9);
    CHECK(c.totals == planned_totals(c.t_max, c.injection_period));
    CHECK_NOTHROW(validate(c));
  }
  CHECK(builtin_scenario("test1-macro").theta == ThetaField::constant(0.0));
  CHECK(builtin_scenario("test1-multiscale").theta == ThetaField::constant(0.7));
  CHECK(builtin_scenario("test2-mixed").theta == ThetaField::indicator({{80, 120}, {80, 120}}));
  CHECK(builtin_scenario("test2-micro").theta == ThetaField::constant(1.0));
  CHECK(builtin_scenario("test2-macro").theta == ThetaField::constant(0.0));
  CHECK_THROWS_AS(builtin_scenario("test3"), ConfigError);
  CHECK(builtin_scenario_names().size() == 5);
}

TEST_CASE("round trip through JSON") {
  for (const auto& name : builtin_scenario_names()) {
    const ScenarioConfig c = builtin_scenario(name);
    CHECK(config_from_json(to_json(c)) == c);
    CHECK(config_from_json(json::parse(to_json(c).dump())) == c);
  }
  ScenarioConfig odd = builtin_scenario("test1-multiscale");
  odd.name = "odd";
  odd.seed = 123456789012345ULL;
  odd.params.eta(P::one, P::two) = 0.1 + 0.2;
  odd.params.gamma = 1.5;
  odd.probes = {{P::one, 3.25}};
  odd.quadrature = {7, 13.0, 2, 4};
  odd.t_max = 33.3;
  CHECK(config_from_json(json::parse(to_json(odd).dump())) == odd);
}

TEST_CASE("derived totals when absent") {
  json j = to_json(builtin_scenario("test2-mixed"));
  j.erase("totals");
  j["t_max"] = 90.0;
  CHECK(config_from_json(j).totals.cars[0] == 100.0);
}

TEST_CASE("validation errors") {
  const json base = to_json(builtin_scenario("test1-multiscale"));

  SUBCASE("theta out of range") {
    json j = base;
    j["theta"]["value"] = 1.5;
    CHECK(mentions(rejection(j), "theta"));
  }
  SUBCASE("unknown key") {
    json j = base;
    j["interaction"]["etta"] = 1.0;
    CHECK(mentions(rejection(j), "etta"));
  }
  SUBCASE("missing field") {
    json j = base;
    j.erase("cells");
    CHECK(mentions(rejection(j), "cells"));
  }
  SUBCASE("wrong type") {
    json j = base;
    j["seed"] = "one";
    CHECK(mentions(rejection(j), "seed"));
  }
  SUBCASE("every offense is listed") {
    json j = base;
    j["theta"]["value"] = -2.0;
    j["dt_max"] = 0.0;
    j["interaction"]["radius"][0][1] = -1.0;
    j["colour"] = "red";
    const ConfigError e = rejection(j);
    CHECK(e.offenses().size() >= 4);
    CHECK(mentions(e, "theta"));
    CHECK(mentions(e, "dt_max"));
    CHECK(mentions(e, "radius"));
    CHECK(mentions(e, "colour"));
  }
}

TEST_CASE("parse_config reads names and files") {
  CHECK(parse_config("test2-macro") == builtin_scenario("test2-macro"));
  const auto path = std::filesystem::temp_directory_path() / "crossroads_config_test.json";
  ScenarioConfig c = builtin_scenario("test2-mixed");
  c.name = "from-file";
  std::ofstream(path) << to_json(c).dump(2);
  CHECK(parse_config(path.string()) == c);
  std::ofstream(path) << "{ not json";
  CHECK_THROWS_AS(parse_config(path.string()), ConfigError);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(parse_config("/nonexistent/config.json"), ConfigError);
}
