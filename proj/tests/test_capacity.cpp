#include <doctest.h>

#include "evac/capacity.hpp"

using namespace evac;

TEST_CASE("lane formula") {
  Bridge b{"x", 2, 2, 1, 1, 2000.0, 0.0};
  CHECK(b.formula() == 6000.0);
  Bridge twin{"y", 3, 2, 2, 1, 2000.0, 0.0};
  CHECK(twin.formula() == 22000.0);
}

TEST_CASE("stated capacities take precedence") {
  const std::vector<Bridge> bridges{{"a", 2, 2, 1, 1, 2000.0, 5000.0}, {"b", 1, 2, 1, 1, 2000.0, 0.0}};
  const auto r = capacity_report(bridges, 9000.0);
  REQUIRE(r.bridges.size() == 2);
  CHECK(r.bridges[0].used == 5000.0);
  CHECK(r.bridges[0].mismatch);
  CHECK(r.bridges[1].used == 2000.0);
  CHECK_FALSE(r.bridges[1].mismatch);
  CHECK(r.total == 7000.0);
  CHECK(r.formula_total == 8000.0);
  CHECK(r.clearance_bound_min == doctest::Approx(60.0 * 9000.0 / 7000.0));
}

TEST_CASE("Amager bridges") {
  const auto r = capacity_report(amager_bridges(), 135448.0);
  CHECK(r.bridges.size() == amager_bridges().size());
  CHECK(r.total > 0.0);
  CHECK(r.clearance_bound_min > 0.0);
}
