#pragma once

#include <iosfwd>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "evac/bathtub.hpp"
#include "evac/demand.hpp"
#include "evac/optimizer.hpp"

namespace evac {

struct MpcProblem {
  DemandSurface demand;               // waiting demand at t = 0
  std::vector<Cohort> initial_active;  // trips on the network at t = 0
  GbmParams gbm;
  NetworkParams network;
  double horizon_h = 1.5;  // releases must happen within [0, horizon]
};

struct MpcConfig {
  double update_step_h = 1.0 / 60.0;
  /// Prediction horizon; NaN means the full remaining horizon.
  double prediction_horizon_h = std::numeric_limits<double>::quiet_NaN();
  std::size_t realizations = 200;
  std::size_t inner_scenarios = 20;
  double beta = 1.0 / 3.0;
  double alpha = 0.8;
  SearchConfig search = [] {
    SearchConfig c;
    c.grid_cutoff = 10;
    c.grid_switch = 10;
    c.pattern_steps = 30;
    return c;
  }();
  std::uint64_t master_seed = 1;
  /// Time span over which (t*, x*) are recorded; NaN means the horizon.
  double record_until_h = std::numeric_limits<double>::quiet_NaN();
  bool warm_start = true;
};

struct MpcRealization {
  std::vector<double> t_star_min;  // remaining time to the switch, per update
  std::vector<double> x_star_km;   // cutoff, per update; the support once all is released
  std::vector<double> active;      // at each update time
  std::vector<double> waiting;
  double delay = 0.0;
  double full_release_h = 0.0;
  bool failed = false;
  std::string failure;
};

struct MpcResult {
  std::vector<double> time_min;
  std::vector<double> mean_t_star_min;
  std::vector<double> mean_x_star_km;
  std::vector<double> mean_active;
  std::vector<double> mean_waiting;
  double mean_delay = 0.0;
  std::size_t failed = 0;
  std::vector<MpcRealization> runs;
};

/// Receding-horizon loop: at each update, optimise a bang-bang plan on sampled demand
/// trajectories from the measured state, apply it until the next update, then re-plan.
/// Realization r follows the true demand stream make_rng(master_seed, r).
MpcResult mpc_run(const MpcProblem& problem, const MpcConfig& config);

/// One realization; exposed for tests.
MpcRealization mpc_realization(const MpcProblem& problem, const MpcConfig& config,
                               std::size_t index);

void write_mpc_csv(std::ostream& out, const MpcResult& result);

}  // namespace evac
