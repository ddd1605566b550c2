#include <doctest.h>

#include <cmath>

#include "evac/error.hpp"
#include "evac/policy.hpp"

using namespace evac;

TEST_CASE("bang-bang release times per bin") {
  const std::vector<double> edges{0.0, 5.0, 10.0, 15.0};
  const auto none = bin_release_times(BangBangPolicy::no_control(), edges);
  for (double t : none) CHECK(t == 0.0);
  const BangBangPolicy p{10.96, 14.0 / 60.0 + 16.0 / 3600.0};
  const auto times = bin_release_times(p, edges);
  CHECK(times[0] == 0.0);
  CHECK(times[1] == 0.0);
  CHECK(times[2] == doctest::Approx(p.switch_time_h));
  // A bin straddling the cutoff waits for the switch.
  const auto straddle = bin_release_times(BangBangPolicy{7.0, 0.1}, edges);
  CHECK(straddle[1] == doctest::Approx(0.1));
}

TEST_CASE("policy validation") {
  CHECK_NOTHROW(BangBangPolicy::no_control().validate(1.5));
  CHECK_THROWS_AS(BangBangPolicy({-1.0, 0.0}).validate(1.5), DomainError);
  CHECK_THROWS_AS(BangBangPolicy({1.0, 2.0}).validate(1.5), DomainError);
  ReleaseTimeMap map{{0.0, 0.2, 0.1}};
  CHECK_FALSE(map.is_monotone());
  CHECK_THROWS_AS(map.validate(1.5), DomainError);
  ReleaseTimeMap ok{{0.0, 0.1, 0.1}};
  CHECK(ok.is_monotone());
  CHECK_NOTHROW(ok.validate(1.5));
  CHECK_THROWS_AS(bin_release_times(Policy{ok}, std::vector<double>{0.0, 1.0}), DomainError);
}
