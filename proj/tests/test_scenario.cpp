#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "evac/error.hpp"
#include "evac/scenario.hpp"

using namespace evac;

TEST_CASE("defaults are valid and round-trip") {
  ScenarioConfig c;
  CHECK(c.violations().empty());
  const auto j = to_json(c);
  const auto back = config_from_json(j);
  CHECK(to_json(back) == j);
  CHECK(config_hash(back) == config_hash(c));
  CHECK(config_hash(c).size() == 16);
  CHECK(config_from_json(nlohmann::json::object()).seed == c.seed);
}

TEST_CASE("hash tracks content") {
  ScenarioConfig a;
  ScenarioConfig b;
  b.seed += 1;
  CHECK(config_hash(a) != config_hash(b));
}

TEST_CASE("overrides") {
  auto j = to_json(ScenarioConfig{});
  apply_override(j, "demand.volatility=0.05");
  apply_override(j, "zone.kind=dumbbell");
  apply_override(j, "risk.alphas=[0.9]");
  const auto c = config_from_json(j);
  CHECK(c.demand.volatility == 0.05);
  CHECK(c.zone.kind == "dumbbell");
  CHECK(c.risk.alphas == std::vector<double>{0.9});
  CHECK_THROWS_AS(apply_override(j, "novalue"), ConfigError);
}

TEST_CASE("bad documents are rejected") {
  auto j = to_json(ScenarioConfig{});
  j["unknown_key"] = 1;
  CHECK_THROWS_AS(config_from_json(j), ConfigError);
  auto k = to_json(ScenarioConfig{});
  k["horizon_h"] = "long";
  CHECK_THROWS_AS(config_from_json(k), ConfigError);
  auto v = to_json(ScenarioConfig{});
  v["schema_version"] = 99;
  CHECK_THROWS_AS(config_from_json(v), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ConfigError);
}

TEST_CASE("violations are collected") {
  ScenarioConfig c;
  c.zone.exit_angles_deg.clear();
  c.demand.volatility = -1.0;
  c.horizon_h = 0.0;
  CHECK(c.violations().size() >= 3);
  CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("load from file") {
  const std::string path = "test_scenario_config.json";
  {
    std::ofstream out(path);
    out << R"({"seed": 7, "demand": {"bins": 50}})";
  }
  const auto c = load_config(path);
  std::remove(path.c_str());
  CHECK(c.seed == 7);
  CHECK(c.demand.bins == 50);
  CHECK(c.demand.volatility == 0.03);
}
