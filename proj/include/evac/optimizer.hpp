#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <vector>

#include "evac/evaluator.hpp"
#include "evac/policy.hpp"

namespace evac {

struct SearchConfig {
  std::size_t grid_cutoff = 20;    // coarse grid points in x0
  std::size_t grid_switch = 20;    // coarse grid points in t_b
  std::size_t pattern_steps = 200;  // compass-search iterations after the grid
  std::size_t max_evaluations = 5000;
  /// Search box; NaN bounds default to [0, support] x [0, horizon].
  double cutoff_lo = 0.0;
  double cutoff_hi = std::numeric_limits<double>::quiet_NaN();
  double switch_hi = std::numeric_limits<double>::quiet_NaN();
  double min_step_km = 1e-3;
  double min_step_h = 1e-4;
  /// Extra starting candidate evaluated before the grid (e.g. a shifted previous plan).
  std::optional<BangBangPolicy> warm_start;
};

struct GridSample {
  BangBangPolicy policy;
  double objective = 0.0;
};

struct OptimizationResult {
  BangBangPolicy policy;
  double objective = 0.0;
  double mean = 0.0;
  double avar = 0.0;
  double no_control_objective = 0.0;
  std::size_t evaluations = 0;  // objective calls
  std::size_t simulations = 0;  // distinct release patterns simulated
  std::vector<GridSample> grid;
};

/// True when a is preferred to b: lower objective, then earlier switch, then wider cutoff.
bool better(const GridSample& a, const GridSample& b);

/**
 * Coarse grid over (x0, t_b) followed by compass search. Throws NumericalError when the
 * evaluation budget cannot cover the coarse grid.
 */
OptimizationResult optimize_bangbang(PolicyEvaluator& evaluator, double beta, double alpha,
                                     const SearchConfig& config = {});

}  // namespace evac
