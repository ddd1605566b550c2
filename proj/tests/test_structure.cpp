#include <doctest.h>

#include "evac/error.hpp"
#include "evac/reproduce.hpp"
#include "evac/structure.hpp"

using namespace evac;

TEST_CASE("predicates") {
  CHECK(is_threshold_in_x({{1, 1, 0}, {1, 1, 1}}));
  CHECK_FALSE(is_threshold_in_x({{1, 0, 1}, {1, 1, 1}}));
  CHECK(is_monotone_release({0, 0, 2, 3}));
  CHECK_FALSE(is_monotone_release({0, 2, 1}));
  CHECK(is_single_switch({0, 0, 2, 2}));
  CHECK(is_single_switch({0, 0, 0}));
  CHECK_FALSE(is_single_switch({0, 1, 2}));
}

TEST_CASE("canonical small instance") {
  const auto best = brute_force_optimal(canonical_small_instance());
  CHECK(best.grids_enumerated == 65536);
  CHECK(best.release_slot == std::vector<std::size_t>{0, 0, 0, 1});
  CHECK(is_threshold_in_x(best.control));
  CHECK(is_monotone_release(best.release_slot));
  CHECK(is_single_switch(best.release_slot));
  CHECK(best.control.size() == 4);
  CHECK(best.control[0] == std::vector<int>{1, 1, 1, 0});
}

TEST_CASE("light demand is released at once") {
  const auto best = brute_force_optimal(canonical_small_instance(0.01, 1.0));
  for (auto s : best.release_slot) CHECK(s == 0);
}

TEST_CASE("instance size limit") {
  SmallInstance in = canonical_small_instance();
  in.time_slots = 6;
  CHECK_THROWS_AS(brute_force_optimal(in), DomainError);
}
