#include <doctest.h>

#include <cmath>
#include <set>

#include "evac/demand.hpp"
#include "evac/error.hpp"
#include "evac/scenario.hpp"

using namespace evac;

TEST_CASE("Amager vehicle count") {
  ScenarioConfig c;
  CHECK(c.total_vehicles() == 135448.0);
}

TEST_CASE("initial surface splits the distribution mass") {
  const auto uni = TripLengthDistribution::from_cdf({0.0, 0.5, 1.0}, {0.0, 0.5, 1.0});
  const std::vector<double> edges{0.0, 0.5, 1.0};
  const auto s = init_surface(1000.0, uni, edges);
  CHECK(s.mass[0] == doctest::Approx(500.0));
  CHECK(s.mass[1] == doctest::Approx(500.0));
  CHECK(s.midpoint(1) == doctest::Approx(0.75));
  const auto empty = init_surface(0.0, uni, edges);
  CHECK(empty.total() == 0.0);
  const std::vector<double> short_edges{0.0, 0.5};
  CHECK_THROWS_AS(init_surface(1.0, uni, short_edges), DomainError);

  ScenarioConfig c;
  const auto surface = c.demand_surface(c.distribution(1.0, nullptr));
  CHECK(surface.total() == doctest::Approx(c.total_vehicles()).epsilon(1e-12));
  CHECK(surface.bins() == c.demand.bins);
}

TEST_CASE("deterministic evolution") {
  DemandSurface s{{0.0, 1.0, 2.0}, {10.0, 20.0}, 0.0};
  Rng rng = make_rng(1, 0);
  const auto same = evolve(s, GbmParams{0.0, 0.0}, 0.5, rng);
  CHECK(same.mass == s.mass);
  CHECK(same.clock == doctest::Approx(0.5));
  const auto grown = evolve(s, GbmParams{1.0, 0.0}, 1.0, rng);
  CHECK(grown.mass[0] == doctest::Approx(10.0 * std::exp(1.0)));
  CHECK(grown.mass[1] == doctest::Approx(20.0 * std::exp(1.0)));
}

TEST_CASE("lognormal mean of the GBM factor") {
  const GbmParams p{0.0, 0.03};
  double sum = 0.0;
  const int paths = 10000;
  for (int i = 0; i < paths; ++i) {
    Rng rng = make_rng(99, static_cast<std::uint64_t>(i));
    DemandSurface s{{0.0, 1.0}, {100.0}, 0.0};
    for (int k = 0; k < 60; ++k) evolve_inplace(s, p, 1.0 / 60.0, rng);
    sum += s.mass[0];
  }
  CHECK(sum / paths == doctest::Approx(100.0).epsilon(0.01));

  // Narrow bins carry more volatility.
  CHECK(effective_volatility(p, 0.25) == doctest::Approx(0.06));
}

TEST_CASE("streams are reproducible and distinct") {
  Rng a = make_rng(5, 3);
  Rng b = make_rng(5, 3);
  Rng c = make_rng(5, 4);
  Rng d = make_rng(6, 3);
  const auto x = a();
  CHECK(x == b());
  std::set<std::uint64_t> draws{x, c(), d()};
  CHECK(draws.size() == 3);
}

TEST_CASE("release drains the due bins at their midpoints") {
  DemandSurface s{{0.0, 1.0, 2.0, 3.0}, {5.0, 6.0, 7.0}, 0.0};
  const BangBangPolicy p{2.0, 0.25};
  auto first = release(s, p, 0.0);
  REQUIRE(first.inflow.size() == 2);
  CHECK(first.inflow[0].remaining == doctest::Approx(0.5));
  CHECK(first.inflow[1].count == doctest::Approx(6.0));
  CHECK(first.surface.total() == doctest::Approx(7.0));
  CHECK(release(first.surface, p, 0.1).inflow.empty());
  auto second = release(first.surface, p, 0.25);
  REQUIRE(second.inflow.size() == 1);
  CHECK(second.surface.total() == 0.0);

  const auto all = release(s, BangBangPolicy::no_control(), 0.0);
  CHECK(all.inflow.size() == 3);
  const auto zero = release(s, BangBangPolicy{0.0, 0.0}, 0.0);
  CHECK(zero.inflow.size() == 3);
  CHECK_THROWS_AS(release(s, p, -1.0), DomainError);
}

TEST_CASE("surface validation") {
  DemandSurface bad{{0.0, 1.0}, {-1.0}, 0.0};
  CHECK_THROWS_AS(bad.validate(), DomainError);
  DemandSurface unsorted{{0.0, 2.0, 1.0}, {1.0, 1.0}, 0.0};
  CHECK_THROWS_AS(unsorted.validate(), DomainError);
  CHECK_THROWS_AS(GbmParams({0.0, -0.1}).validate(), DomainError);
}
