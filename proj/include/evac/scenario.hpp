#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "evac/bathtub.hpp"
#include "evac/capacity.hpp"
#include "evac/demand.hpp"
#include "evac/dumbbell.hpp"
#include "evac/evaluator.hpp"
#include "evac/flood.hpp"
#include "evac/geometry.hpp"
#include "evac/mpc.hpp"
#include "evac/nfd.hpp"
#include "evac/optimizer.hpp"

namespace evac {

inline constexpr int kSchemaVersion = 1;

/**
 * Complete, self-contained description of one evacuation study. Defaults reproduce the
 * Amager case. Serialised as JSON; every field has a default so partial files are valid.
 */
struct ScenarioConfig {
  int schema_version = kSchemaVersion;

  struct Zone {
    std::string kind = "disk";  // disk | dumbbell
    double radius_km = 5.54;
    std::vector<double> exit_angles_deg{92.9, 145.3, 194.3};
    DumbbellZone dumbbell;
  } zone;

  double population = 225746.0;
  double motorization_rate = 0.6;

  struct Network {
    std::string model = "triangular";  // triangular | trapezoidal | linear
    double free_flow_speed_kmh = 65.0;
    double capacity_veh_h_lane = 1600.0;
    double jam_density_veh_km_lane = 120.0;
    double rho_1 = 20.0;  // trapezoidal breakpoints, veh/km/lane
    double rho_2 = 40.0;
    double lane_km = 2442.1;
    double dt_s = 10.0;
  } network;

  std::vector<Bridge> bridges = amager_bridges();

  struct Demand {
    double drift_per_h = 0.0;
    double volatility = 0.03;
    std::size_t bins = 200;
  } demand;

  std::vector<double> mixture_weights{1.0, 2.0 / 3.0, 1.0 / 3.0};

  struct Risk {
    double beta = 1.0 / 3.0;
    std::vector<double> alphas{0.8, 0.95, 0.99};
  } risk;

  struct Flood {
    double still_water_depth_m = 3.0;
    double max_elevation_m = 10.0;
    double floor_s = 60.0;
    std::string arrival_mode = "inverted";  // inverted | closed-form
    std::size_t rings = 300;
    std::size_t sectors = 720;
  } flood;

  double horizon_h = 1.5;
  std::size_t distribution_points = 801;
  double headway_s = 2.0;
  std::uint64_t seed = 20240601;
  std::size_t scenarios = 500;

  struct Optimizer {
    std::size_t grid_cutoff = 20;
    std::size_t grid_switch = 20;
    std::size_t pattern_steps = 200;
    std::size_t max_evaluations = 5000;
  } optimizer;

  struct Mpc {
    double update_min = 1.0;
    std::optional<double> prediction_horizon_h;
    std::size_t realizations = 200;
    std::size_t inner_scenarios = 20;
    std::size_t grid = 10;
    std::size_t pattern_steps = 30;
    double record_until_min = 60.0;
  } mpc;

  /// Every violated constraint, human readable; empty when valid.
  std::vector<std::string> violations() const;
  /// Throws ConfigError listing all violations.
  void validate() const;

  // Builders.
  DiskZone disk() const;
  SpeedDensityModel model() const;
  NetworkParams network_params() const;
  double total_vehicles() const;
  SurgeParams surge() const;
  RiskGridSpec risk_grid() const;
  RiskField risk_field() const;
  GbmParams gbm() const;
  std::vector<double> distance_grid() const;
  TripLengthDistribution distribution(double mixture_weight, const RiskField* field) const;
  DemandSurface demand_surface(const TripLengthDistribution& dist) const;
  ScenarioSet scenario_set(const TripLengthDistribution& dist) const;
  SearchConfig search() const;
  MpcConfig mpc_config(double alpha) const;
  MpcProblem mpc_problem(const TripLengthDistribution& dist) const;
};

nlohmann::json to_json(const ScenarioConfig& config);
/// Throws ConfigError on unknown keys, wrong types, or a schema version mismatch.
ScenarioConfig config_from_json(const nlohmann::json& j);
ScenarioConfig load_config(const std::string& path);

/// Applies "a.b.c=value" to a JSON document; the value is parsed as JSON when possible and
/// taken as a string otherwise.
void apply_override(nlohmann::json& doc, const std::string& assignment);

/// FNV-1a 64-bit hash of the canonical JSON serialisation, as 16 hex digits.
std::string config_hash(const ScenarioConfig& config);

}  // namespace evac
