#pragma once

#include "evac/scenario.hpp"

namespace evac::testing {

/// Amager network and geometry with a coarse demand grid and few scenarios.
inline ScenarioConfig small_config(std::size_t scenarios = 8, std::size_t bins = 40) {
  ScenarioConfig c;
  c.demand.bins = bins;
  c.scenarios = scenarios;
  c.distribution_points = 201;
  c.optimizer.grid_cutoff = 8;
  c.optimizer.grid_switch = 8;
  c.optimizer.pattern_steps = 20;
  return c;
}

inline const TripLengthDistribution& small_distribution() {
  static const TripLengthDistribution dist = small_config().distribution(1.0, nullptr);
  return dist;
}

}  // namespace evac::testing
