#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "evac/bathtub.hpp"
#include "evac/scenario.hpp"
#include "evac/structure.hpp"

namespace evac {

/// Outcome of one acceptance criterion. `lines` holds one human-readable line per sub-check
/// and `data` the numbers behind them.
struct CheckResult {
  int criterion = 0;
  std::string name;
  bool pass = false;
  double seconds = 0.0;
  double budget_s = 0.0;
  std::vector<std::string> lines;
  nlohmann::json data = nlohmann::json::object();
};

nlohmann::json to_json(const CheckResult& result);

/// Sizes of the expensive checks; defaults are the acceptance settings.
struct ReproduceOptions {
  std::size_t monte_carlo_samples = 1'000'000;
  std::size_t table_scenarios = 500;
  std::size_t mpc_realizations = 200;
};

/// Three-cohort example on the unit linear network: cohorts of 1/3 at 1, 10 and 19 km, each
/// released once everything released before it has completed. With epsilon > 0 that much of
/// the 10 km cohort joins the first release.
struct CounterexampleRun {
  std::array<double, 3> travel_h{};  // completion minus release, per cohort (epsilon = 0)
  double delay = 0.0;                // integral of active + waiting
  SimulationTrace trace;
};

CounterexampleRun counterexample_run(double epsilon);

/// (D(epsilon) - D(0)) / epsilon.
double counterexample_derivative(double epsilon);

/// Four equal-mass bins on [0, 4] km, unit linear network, four unit slots.
SmallInstance canonical_small_instance(double total = 0.6, double slot_h = 1.0);

CheckResult check_counterexample(const ScenarioConfig& config, const ReproduceOptions& options);
CheckResult check_geometry_constants(const ScenarioConfig& config,
                                     const ReproduceOptions& options);
CheckResult check_distribution(const ScenarioConfig& config, const ReproduceOptions& options);
CheckResult check_hazard(const ScenarioConfig& config, const ReproduceOptions& options);
CheckResult check_capacities(const ScenarioConfig& config, const ReproduceOptions& options);
CheckResult check_avar(const ScenarioConfig& config, const ReproduceOptions& options);
CheckResult check_conservation(const ScenarioConfig& config, const ReproduceOptions& options);
CheckResult check_propositions(const ScenarioConfig& config, const ReproduceOptions& options);
CheckResult check_tables(const ScenarioConfig& config, const ReproduceOptions& options);
CheckResult check_mpc(const ScenarioConfig& config, const ReproduceOptions& options);
CheckResult check_flood(const ScenarioConfig& config, const ReproduceOptions& options);
CheckResult check_costate(const ScenarioConfig& config, const ReproduceOptions& options);

/// Targets: counterexample, geometry, capacities, risk, conservation, propositions, tables,
/// mpc-figures, flood, all.
const std::vector<std::string>& reproduce_targets();

/// Runs the checks of a target in criterion order. Throws ConfigError on an unknown target.
std::vector<CheckResult> run_target(const std::string& target, const ScenarioConfig& config,
                                    const ReproduceOptions& options = {});

}  // namespace evac
