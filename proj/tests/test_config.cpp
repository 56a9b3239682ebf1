#include <doctest.h>

#include <fstream>
#include <sstream>

#include "ascent/config.hpp"

using namespace ascent;

TEST_CASE("empty text yields the documented defaults") {
  const ScenarioConfig c = parse_config("");
  CHECK(c.workspace_side == 10.0);
  CHECK(c.num_sensors == 4);
  CHECK(c.num_targets == 100);
  CHECK(c.sensor.c0 == 0.5);
  CHECK(c.sensor.c1 == 10.0);
  CHECK(c.sensor.rho == 30.0);
  CHECK_FALSE(c.sensor.range_max.has_value());
  CHECK(c.sensor.pos_epsilon == 1e-3);
  CHECK(c.resolved_tau() == std::vector<double>(100, 9.0));
  CHECK(c.delta == 1.0);
  CHECK(c.comm_radius == 4.0);
  CHECK(c.dropout == 0.0);
  CHECK(c.alpha_a == 1.0);
  CHECK(c.alpha_b == 0.0);
  CHECK(c.k_max == 30);
  CHECK(c.early_stop_rel == 0.10);
  CHECK(c.t_max == 2000);
  CHECK(c.seed == 1);
  CHECK(c.landmark_source == "uniform");
  CHECK(c.output_dir == "out");
  CHECK_FALSE(c.sensor_start.has_value());
  CHECK_FALSE(c.inner_diagnostics);
}

TEST_CASE("the shipped experiment scenario parses to the reference parameters") {
  const ScenarioConfig c = load_config(std::string(ASCENT_SOURCE_DIR) + "/scenarios/full.cfg");
  CHECK(c.workspace_side == 10.0);
  CHECK(c.num_sensors == 4);
  CHECK(c.num_targets == 100);
  CHECK(c.sensor.c0 == 0.5);
  CHECK(c.sensor.c1 == 10.0);
  CHECK(c.sensor.rho == 30.0);
  CHECK(c.resolved_tau() == std::vector<double>(100, 9.0));
  CHECK(c.delta == 1.0);
  CHECK(c.alpha_a == 1.0);
  CHECK(c.alpha_b == 0.0);
  CHECK(c.k_max == 30);
  CHECK(c.early_stop_rel == 0.10);
}

TEST_CASE("comments, blank lines and whitespace are tolerated") {
  const ScenarioConfig c = parse_config(
      "# full line comment\n"
      "\n"
      "  sensors = 2   # trailing comment\n"
      "\ttau = 1.5, 2.5\t\n"
      "landmarks = 2\n");
  CHECK(c.num_sensors == 2);
  CHECK(c.resolved_tau() == std::vector<double>{1.5, 2.5});
}

TEST_CASE("unknown keys are rejected with the key name and line") {
  CHECK_THROWS_WITH_AS(parse_config("sensrs = 4\n"), "unknown key 'sensrs' (line 1)",
                       ConfigError);
}

TEST_CASE("type mismatches name the key") {
  CHECK_THROWS_WITH_AS(parse_config("c0 = fast\n"), "c0: expected a number, got 'fast' (line 1)",
                       ConfigError);
  CHECK_THROWS_AS(parse_config("sensors = 2.5\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("k_max = -3\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("tau = \n"), ConfigError);
}

TEST_CASE("constraint violations are revalidated at load") {
  CHECK_THROWS_WITH_AS(parse_config("rho = 0.5\n"), "rho: must be > 1", ConfigError);
  CHECK_THROWS_AS(parse_config("dropout = 1.0\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("delta = 0\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("landmarks = 4\ntau = 1, 2, 3\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("landmark_source = file\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("sensors = 2\nsensor_start = 0 0\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("alpha_a = 0\n"), ConfigError);
}

TEST_CASE("optional keys parse both states") {
  ScenarioConfig c = parse_config("range_max = 2.5\n");
  CHECK(*c.sensor.range_max == 2.5);
  c = parse_config("range_max = none\n");
  CHECK_FALSE(c.sensor.range_max.has_value());

  c = parse_config("sensors = 2\nsensor_start = 0.5 0.5; 1.0 1.0\n");
  REQUIRE(c.sensor_start.has_value());
  CHECK((*c.sensor_start)[1][0] == 1.0);

  c = parse_config("inner_diagnostics = on\n");
  CHECK(c.inner_diagnostics);
}

TEST_CASE("per-landmark tolerances broadcast or match the count") {
  ScenarioConfig c = parse_config("landmarks = 3\ntau = 4\n");
  CHECK(c.resolved_tau() == std::vector<double>(3, 4.0));
  c = parse_config("landmarks = 3\ntau = 1, 2, 3\n");
  CHECK(c.resolved_tau() == std::vector<double>{1.0, 2.0, 3.0});
}

TEST_CASE("every config key is documented in the README table") {
  std::ifstream readme(std::string(ASCENT_SOURCE_DIR) + "/README.md");
  REQUIRE(readme.good());
  std::stringstream buffer;
  buffer << readme.rdbuf();
  const std::string text = buffer.str();
  for (const char* key :
       {"workspace_side", "sensors", "landmarks", "c0", "c1", "rho", "range_max",
        "pos_epsilon", "tau", "delta", "comm_radius", "dropout", "alpha_a", "alpha_b",
        "k_max", "early_stop_rel", "t_max", "seed", "landmark_source", "landmark_file",
        "output_dir", "sensor_start", "inner_diagnostics"}) {
    CHECK(text.find("`" + std::string(key) + "`") != std::string::npos);
  }
}
