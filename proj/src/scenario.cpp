#include "evac/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "evac/error.hpp"
#include "evac/units.hpp"

namespace evac {

using nlohmann::json;

namespace {

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& s : items) {
    if (!out.empty()) out += "; ";
    out += s;
  }
  return out;
}

/// Reads typed members of one JSON object, recording type errors and unknown keys.
class Reader {
public:
  Reader(const json& obj, std::string path, std::vector<std::string>& errors)
      : obj_(obj), path_(std::move(path)), errors_(errors) {
    if (!obj_.is_object()) errors_.push_back(where("") + " must be an object");
  }
  ~Reader() {
    if (!obj_.is_object()) return;
    for (const auto& [key, value] : obj_.items()) {
      if (!known_.count(key)) errors_.push_back("unknown key " + where(key));
    }
  }
  Reader(const Reader&) = delete;
  Reader& operator=(const Reader&) = delete;

  template <typename T>
  void get(const char* key, T& target) {
    known_.insert(key);
    if (!obj_.is_object() || !obj_.contains(key)) return;
    try {
      target = obj_.at(key).get<T>();
    } catch (const json::exception&) {
      errors_.push_back(where(key) + " has the wrong type");
    }
  }

  const json* child(const char* key) {
    known_.insert(key);
    if (!obj_.is_object() || !obj_.contains(key)) return nullptr;
    return &obj_.at(key);
  }

  std::string where(const std::string& key) const {
    if (key.empty()) return path_.empty() ? "<root>" : path_;
    return path_.empty() ? key : path_ + "." + key;
  }

private:
  const json& obj_;
  std::string path_;
  std::vector<std::string>& errors_;
  std::set<std::string> known_;
};

void positive(std::vector<std::string>& v, const char* name, double x) {
  if (!(x > 0.0) || !std::isfinite(x)) v.push_back(std::string(name) + " must be positive");
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> violations)
    : std::runtime_error("invalid configuration: " + join(violations)),
      violations_(std::move(violations)) {}

std::vector<std::string> ScenarioConfig::violations() const {
  std::vector<std::string> v;
  if (schema_version != kSchemaVersion) {
    v.push_back("schema_version must be " + std::to_string(kSchemaVersion));
  }
  if (zone.kind != "disk" && zone.kind != "dumbbell") {
    v.push_back("zone.kind must be disk or dumbbell");
  }
  positive(v, "zone.radius_km", zone.radius_km);
  if (zone.kind == "disk") {
    if (zone.exit_angles_deg.empty()) v.push_back("zone.exit_angles_deg must not be empty");
    try {
      if (!zone.exit_angles_deg.empty() && zone.radius_km > 0.0) disk();
    } catch (const DomainError& e) {
      v.push_back(std::string("zone: ") + e.what());
    }
  } else {
    try {
      zone.dumbbell.validate();
    } catch (const DomainError& e) {
      v.push_back(std::string("zone.dumbbell: ") + e.what());
    }
  }
  if (!(population >= 0.0)) v.push_back("population must be non-negative");
  if (!(motorization_rate >= 0.0) || motorization_rate > 1.0) {
    v.push_back("motorization_rate must lie in [0, 1]");
  }
  if (network.model != "triangular" && network.model != "trapezoidal" &&
      network.model != "linear") {
    v.push_back("network.model must be triangular, trapezoidal or linear");
  }
  positive(v, "network.free_flow_speed_kmh", network.free_flow_speed_kmh);
  positive(v, "network.capacity_veh_h_lane", network.capacity_veh_h_lane);
  positive(v, "network.jam_density_veh_km_lane", network.jam_density_veh_km_lane);
  positive(v, "network.lane_km", network.lane_km);
  positive(v, "network.dt_s", network.dt_s);
  if (network.model == "trapezoidal" &&
      !(network.rho_1 > 0.0 && network.rho_1 < network.rho_2 &&
        network.rho_2 < network.jam_density_veh_km_lane)) {
    v.push_back("network.rho_1 < network.rho_2 < jam density required for trapezoidal");
  }
  if (network.model == "triangular" &&
      network.capacity_veh_h_lane / network.free_flow_speed_kmh >=
          network.jam_density_veh_km_lane) {
    v.push_back("triangular critical density must lie below jam density");
  }
  if (bridges.empty()) v.push_back("bridges must not be empty");
  for (const Bridge& b : bridges) {
    if (b.lanes * b.directions * b.structures - b.reserved <= 0) {
      v.push_back("bridge " + b.name + " has no usable lanes");
    }
    if (!(b.per_lane > 0.0)) v.push_back("bridge " + b.name + " per-lane capacity must be > 0");
    if (b.stated < 0.0) v.push_back("bridge " + b.name + " stated capacity must be >= 0");
  }
  if (!(demand.volatility >= 0.0)) v.push_back("demand.volatility must be non-negative");
  if (!std::isfinite(demand.drift_per_h)) v.push_back("demand.drift_per_h must be finite");
  if (demand.bins == 0) v.push_back("demand.bins must be positive");
  if (mixture_weights.empty()) v.push_back("mixture_weights must not be empty");
  for (double w : mixture_weights) {
    if (!(w >= 0.0 && w <= 1.0)) v.push_back("mixture weights must lie in [0, 1]");
  }
  if (!(risk.beta >= 0.0)) v.push_back("risk.beta must be non-negative");
  if (risk.alphas.empty()) v.push_back("risk.alphas must not be empty");
  for (double a : risk.alphas) {
    if (!(a >= 0.0 && a < 1.0)) v.push_back("risk.alphas must lie in [0, 1)");
  }
  positive(v, "flood.still_water_depth_m", flood.still_water_depth_m);
  positive(v, "flood.max_elevation_m", flood.max_elevation_m);
  positive(v, "flood.floor_s", flood.floor_s);
  if (flood.arrival_mode != "inverted" && flood.arrival_mode != "closed-form") {
    v.push_back("flood.arrival_mode must be inverted or closed-form");
  }
  if (flood.rings == 0 || flood.sectors == 0) v.push_back("flood grid must be non-empty");
  positive(v, "horizon_h", horizon_h);
  if (distribution_points < 3) v.push_back("distribution_points must be at least 3");
  positive(v, "headway_s", headway_s);
  if (scenarios == 0) v.push_back("scenarios must be positive");
  if (optimizer.grid_cutoff < 2 || optimizer.grid_switch < 2) {
    v.push_back("optimizer grid needs at least 2 points per axis");
  }
  positive(v, "mpc.update_min", mpc.update_min);
  if (mpc.prediction_horizon_h && !(*mpc.prediction_horizon_h >= mpc.update_min / 60.0)) {
    v.push_back("mpc.prediction_horizon_h must be at least the update step");
  }
  if (mpc.realizations == 0) v.push_back("mpc.realizations must be positive");
  if (mpc.inner_scenarios == 0) v.push_back("mpc.inner_scenarios must be positive");
  if (mpc.grid < 2) v.push_back("mpc.grid must be at least 2");
  if (!(mpc.record_until_min >= 0.0)) v.push_back("mpc.record_until_min must be >= 0");
  if (network.dt_s > 0.0 && mpc.update_min > 0.0) {
    const double ratio = mpc.update_min * 60.0 / network.dt_s;
    if (std::abs(ratio - std::round(ratio)) > 1e-9) {
      v.push_back("mpc.update_min must be a multiple of network.dt_s");
    }
  }
  return v;
}

void ScenarioConfig::validate() const {
  auto v = violations();
  if (!v.empty()) throw ConfigError(std::move(v));
}

DiskZone ScenarioConfig::disk() const {
  return DiskZone::from_degrees(zone.radius_km, zone.exit_angles_deg);
}

SpeedDensityModel ScenarioConfig::model() const {
  if (network.model == "linear") {
    return SpeedDensityModel::linear(network.free_flow_speed_kmh, network.jam_density_veh_km_lane);
  }
  if (network.model == "trapezoidal") {
    return SpeedDensityModel::trapezoidal(network.free_flow_speed_kmh, network.rho_1,
                                          network.rho_2, network.jam_density_veh_km_lane);
  }
  return SpeedDensityModel::triangular(network.free_flow_speed_kmh, network.capacity_veh_h_lane,
                                       network.jam_density_veh_km_lane);
}

NetworkParams ScenarioConfig::network_params() const {
  NetworkParams p;
  p.lane_km = network.lane_km;
  p.model = model();
  p.exit_capacity = capacity_report(bridges, total_vehicles()).total;
  p.dt = units::seconds_to_hours(network.dt_s);
  return p;
}

double ScenarioConfig::total_vehicles() const { return std::round(population * motorization_rate); }

SurgeParams ScenarioConfig::surge() const {
  SurgeParams p;
  p.still_water_depth_m = flood.still_water_depth_m;
  p.max_elevation_m = flood.max_elevation_m;
  p.radius_m = units::km_to_m(zone.radius_km);
  return p;
}

RiskGridSpec ScenarioConfig::risk_grid() const {
  RiskGridSpec spec;
  spec.rings = flood.rings;
  spec.sectors = flood.sectors;
  spec.floor_s = flood.floor_s;
  spec.mode = flood.arrival_mode == "closed-form" ? ArrivalMode::ClosedForm : ArrivalMode::Inverted;
  return spec;
}

RiskField ScenarioConfig::risk_field() const {
  return build_risk_field(surge(), zone.radius_km, risk_grid());
}

GbmParams ScenarioConfig::gbm() const { return GbmParams{demand.drift_per_h, demand.volatility}; }

std::vector<double> ScenarioConfig::distance_grid() const {
  return uniform_grid(0.0, disk().max_min_distance(), distribution_points);
}

TripLengthDistribution ScenarioConfig::distribution(double mixture_weight,
                                                    const RiskField* field) const {
  if (zone.kind == "dumbbell") return dumbbell_distribution(zone.dumbbell);
  RiskDensity risk;
  if (mixture_weight < 1.0) {
    if (!field) throw DomainError("risk field required for mixture weight < 1");
    risk = field->density();
  }
  auto grid = distance_grid();
  return build_distribution(disk(), mixture_weight, risk, grid);
}

DemandSurface ScenarioConfig::demand_surface(const TripLengthDistribution& dist) const {
  auto edges = uniform_edges(0.0, dist.distance.back(), demand.bins);
  return init_surface(total_vehicles(), dist, edges);
}

ScenarioSet ScenarioConfig::scenario_set(const TripLengthDistribution& dist) const {
  ScenarioSet set;
  set.master_seed = seed;
  set.count = scenarios;
  set.gbm = gbm();
  set.demand = demand_surface(dist);
  set.network = network_params();
  set.horizon_h = horizon_h;
  return set;
}

SearchConfig ScenarioConfig::search() const {
  SearchConfig c;
  c.grid_cutoff = optimizer.grid_cutoff;
  c.grid_switch = optimizer.grid_switch;
  c.pattern_steps = optimizer.pattern_steps;
  c.max_evaluations = optimizer.max_evaluations;
  return c;
}

MpcConfig ScenarioConfig::mpc_config(double alpha) const {
  MpcConfig c;
  c.update_step_h = units::minutes_to_hours(mpc.update_min);
  if (mpc.prediction_horizon_h) c.prediction_horizon_h = *mpc.prediction_horizon_h;
  c.realizations = mpc.realizations;
  c.inner_scenarios = mpc.inner_scenarios;
  c.beta = risk.beta;
  c.alpha = alpha;
  c.search.grid_cutoff = mpc.grid;
  c.search.grid_switch = mpc.grid;
  c.search.pattern_steps = mpc.pattern_steps;
  c.master_seed = seed;
  c.record_until_h = units::minutes_to_hours(mpc.record_until_min);
  return c;
}

MpcProblem ScenarioConfig::mpc_problem(const TripLengthDistribution& dist) const {
  MpcProblem p;
  p.demand = demand_surface(dist);
  p.gbm = gbm();
  p.network = network_params();
  p.horizon_h = horizon_h;
  return p;
}

json to_json(const ScenarioConfig& c) {
  json bridges = json::array();
  for (const Bridge& b : c.bridges) {
    bridges.push_back({{"name", b.name},
                       {"lanes", b.lanes},
                       {"directions", b.directions},
                       {"structures", b.structures},
                       {"reserved", b.reserved},
                       {"per_lane", b.per_lane},
                       {"stated", b.stated}});
  }
  const DumbbellZone& d = c.zone.dumbbell;
  return json{
      {"schema_version", c.schema_version},
      {"zone",
       {{"kind", c.zone.kind},
        {"radius_km", c.zone.radius_km},
        {"exit_angles_deg", c.zone.exit_angles_deg},
        {"dumbbell",
         {{"left_centre", {d.left_centre.x, d.left_centre.y}},
          {"right_centre", {d.right_centre.x, d.right_centre.y}},
          {"disk_radius", d.disk_radius},
          {"corridor_half_width", d.corridor_half_width},
          {"exit", {d.exit.x, d.exit.y}},
          {"resolution", d.resolution}}}}},
      {"population", c.population},
      {"motorization_rate", c.motorization_rate},
      {"network",
       {{"model", c.network.model},
        {"free_flow_speed_kmh", c.network.free_flow_speed_kmh},
        {"capacity_veh_h_lane", c.network.capacity_veh_h_lane},
        {"jam_density_veh_km_lane", c.network.jam_density_veh_km_lane},
        {"rho_1", c.network.rho_1},
        {"rho_2", c.network.rho_2},
        {"lane_km", c.network.lane_km},
        {"dt_s", c.network.dt_s}}},
      {"bridges", bridges},
      {"demand",
       {{"drift_per_h", c.demand.drift_per_h},
        {"volatility", c.demand.volatility},
        {"bins", c.demand.bins}}},
      {"mixture_weights", c.mixture_weights},
      {"risk", {{"beta", c.risk.beta}, {"alphas", c.risk.alphas}}},
      {"flood",
       {{"still_water_depth_m", c.flood.still_water_depth_m},
        {"max_elevation_m", c.flood.max_elevation_m},
        {"floor_s", c.flood.floor_s},
        {"arrival_mode", c.flood.arrival_mode},
        {"rings", c.flood.rings},
        {"sectors", c.flood.sectors}}},
      {"horizon_h", c.horizon_h},
      {"distribution_points", c.distribution_points},
      {"headway_s", c.headway_s},
      {"seed", c.seed},
      {"scenarios", c.scenarios},
      {"optimizer",
       {{"grid_cutoff", c.optimizer.grid_cutoff},
        {"grid_switch", c.optimizer.grid_switch},
        {"pattern_steps", c.optimizer.pattern_steps},
        {"max_evaluations", c.optimizer.max_evaluations}}},
      {"mpc",
       {{"update_min", c.mpc.update_min},
        {"prediction_horizon_h",
         c.mpc.prediction_horizon_h ? json(*c.mpc.prediction_horizon_h) : json(nullptr)},
        {"realizations", c.mpc.realizations},
        {"inner_scenarios", c.mpc.inner_scenarios},
        {"grid", c.mpc.grid},
        {"pattern_steps", c.mpc.pattern_steps},
        {"record_until_min", c.mpc.record_until_min}}},
  };
}

ScenarioConfig config_from_json(const json& j) {
  ScenarioConfig c;
  std::vector<std::string> errors;
  {
    Reader root(j, "", errors);
    root.get("schema_version", c.schema_version);
    if (const json* z = root.child("zone")) {
      Reader r(*z, "zone", errors);
      r.get("kind", c.zone.kind);
      r.get("radius_km", c.zone.radius_km);
      r.get("exit_angles_deg", c.zone.exit_angles_deg);
      if (const json* db = r.child("dumbbell")) {
        Reader rd(*db, "zone.dumbbell", errors);
        auto point = [&](const char* key, Point& p) {
          std::vector<double> xy{p.x, p.y};
          rd.get(key, xy);
          if (xy.size() != 2) {
            errors.push_back(rd.where(key) + " must have two coordinates");
          } else {
            p = {xy[0], xy[1]};
          }
        };
        point("left_centre", c.zone.dumbbell.left_centre);
        point("right_centre", c.zone.dumbbell.right_centre);
        point("exit", c.zone.dumbbell.exit);
        rd.get("disk_radius", c.zone.dumbbell.disk_radius);
        rd.get("corridor_half_width", c.zone.dumbbell.corridor_half_width);
        rd.get("resolution", c.zone.dumbbell.resolution);
      }
    }
    root.get("population", c.population);
    root.get("motorization_rate", c.motorization_rate);
    if (const json* n = root.child("network")) {
      Reader r(*n, "network", errors);
      r.get("model", c.network.model);
      r.get("free_flow_speed_kmh", c.network.free_flow_speed_kmh);
      r.get("capacity_veh_h_lane", c.network.capacity_veh_h_lane);
      r.get("jam_density_veh_km_lane", c.network.jam_density_veh_km_lane);
      r.get("rho_1", c.network.rho_1);
      r.get("rho_2", c.network.rho_2);
      r.get("lane_km", c.network.lane_km);
      r.get("dt_s", c.network.dt_s);
    }
    if (const json* bs = root.child("bridges")) {
      if (!bs->is_array()) {
        errors.push_back("bridges must be an array");
      } else {
        c.bridges.clear();
        for (std::size_t i = 0; i < bs->size(); ++i) {
          Reader r((*bs)[i], "bridges[" + std::to_string(i) + "]", errors);
          Bridge b;
          r.get("name", b.name);
          r.get("lanes", b.lanes);
          r.get("directions", b.directions);
          r.get("structures", b.structures);
          r.get("reserved", b.reserved);
          r.get("per_lane", b.per_lane);
          r.get("stated", b.stated);
          c.bridges.push_back(b);
        }
      }
    }
    if (const json* d = root.child("demand")) {
      Reader r(*d, "demand", errors);
      r.get("drift_per_h", c.demand.drift_per_h);
      r.get("volatility", c.demand.volatility);
      r.get("bins", c.demand.bins);
    }
    root.get("mixture_weights", c.mixture_weights);
    if (const json* k = root.child("risk")) {
      Reader r(*k, "risk", errors);
      r.get("beta", c.risk.beta);
      r.get("alphas", c.risk.alphas);
    }
    if (const json* f = root.child("flood")) {
      Reader r(*f, "flood", errors);
      r.get("still_water_depth_m", c.flood.still_water_depth_m);
      r.get("max_elevation_m", c.flood.max_elevation_m);
      r.get("floor_s", c.flood.floor_s);
      r.get("arrival_mode", c.flood.arrival_mode);
      r.get("rings", c.flood.rings);
      r.get("sectors", c.flood.sectors);
    }
    root.get("horizon_h", c.horizon_h);
    root.get("distribution_points", c.distribution_points);
    root.get("headway_s", c.headway_s);
    root.get("seed", c.seed);
    root.get("scenarios", c.scenarios);
    if (const json* o = root.child("optimizer")) {
      Reader r(*o, "optimizer", errors);
      r.get("grid_cutoff", c.optimizer.grid_cutoff);
      r.get("grid_switch", c.optimizer.grid_switch);
      r.get("pattern_steps", c.optimizer.pattern_steps);
      r.get("max_evaluations", c.optimizer.max_evaluations);
    }
    if (const json* m = root.child("mpc")) {
      Reader r(*m, "mpc", errors);
      r.get("update_min", c.mpc.update_min);
      if (const json* hp = r.child("prediction_horizon_h")) {
        if (hp->is_null()) {
          c.mpc.prediction_horizon_h.reset();
        } else if (hp->is_number()) {
          c.mpc.prediction_horizon_h = hp->get<double>();
        } else {
          errors.push_back("mpc.prediction_horizon_h must be a number or null");
        }
      }
      r.get("realizations", c.mpc.realizations);
      r.get("inner_scenarios", c.mpc.inner_scenarios);
      r.get("grid", c.mpc.grid);
      r.get("pattern_steps", c.mpc.pattern_steps);
      r.get("record_until_min", c.mpc.record_until_min);
    }
  }
  if (errors.empty()) {
    auto v = c.violations();
    errors.insert(errors.end(), v.begin(), v.end());
  }
  if (!errors.empty()) throw ConfigError(std::move(errors));
  return c;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError({"cannot open configuration file " + path});
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError({std::string("configuration is not valid JSON: ") + e.what()});
  }
  return config_from_json(j);
}

void apply_override(json& doc, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ConfigError({"override must look like key.path=value: " + assignment});
  }
  const std::string path = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  json value;
  try {
    value = json::parse(text);
  } catch (const json::parse_error&) {
    value = text;
  }
  json* node = &doc;
  std::size_t start = 0;
  for (;;) {
    const auto dot = path.find('.', start);
    const std::string key = path.substr(start, dot - start);
    if (key.empty()) throw ConfigError({"empty key in override " + assignment});
    if (!node->is_object()) throw ConfigError({"override path is not an object: " + path});
    if (dot == std::string::npos) {
      (*node)[key] = value;
      return;
    }
    node = &(*node)[key];
    if (node->is_null()) *node = json::object();
    start = dot + 1;
  }
}

std::string config_hash(const ScenarioConfig& config) {
  const std::string text = to_json(config).dump();
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace evac
