/**
 * evac: command-line front end for the staged-departure evacuation toolkit.
 *
 * Every subcommand loads a JSON scenario (Amager defaults when none is given), applies
 * --set overrides and --seed, validates, and writes its artifacts into --out. Each artifact
 * carries the tool version, the command, the configuration hash and the seed. A one-line
 * JSON summary goes to stdout; failures print an error document to stderr and exit nonzero.
 */

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "evac/capacity.hpp"
#include "evac/error.hpp"
#include "evac/evaluator.hpp"
#include "evac/flood.hpp"
#include "evac/geometry.hpp"
#include "evac/mpc.hpp"
#include "evac/optimizer.hpp"
#include "evac/output.hpp"
#include "evac/parallel.hpp"
#include "evac/reproduce.hpp"
#include "evac/scenario.hpp"
#include "evac/units.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace evac;

namespace {

enum ExitCode { kOk = 0, kFailure = 1, kUsage = 2, kConfig = 3, kDomain = 4, kNumerical = 5 };

struct GlobalOptions {
  std::string config_path;
  std::vector<std::string> overrides;
  std::optional<std::uint64_t> seed;
  std::string out_dir = "evac_out";
};

/// Everything a subcommand needs: the resolved configuration and where to write.
struct Context {
  ScenarioConfig config;
  std::string hash;
  fs::path out;

  Provenance provenance(const std::string& command) const {
    return {command, hash, config.seed};
  }
  std::string path(const std::string& name) const { return (out / name).string(); }
};

Context make_context(const GlobalOptions& g) {
  json doc = g.config_path.empty() ? to_json(ScenarioConfig{}) : [&] {
    std::ifstream in(g.config_path);
    if (!in) throw ConfigError({"cannot open configuration file " + g.config_path});
    try {
      return json::parse(in);
    } catch (const json::parse_error& e) {
      throw ConfigError({std::string("configuration is not valid JSON: ") + e.what()});
    }
  }();
  for (const auto& o : g.overrides) apply_override(doc, o);
  Context ctx;
  ctx.config = config_from_json(doc);
  if (g.seed) ctx.config.seed = *g.seed;
  ctx.config.validate();
  ctx.hash = config_hash(ctx.config);
  ctx.out = g.out_dir;
  fs::create_directories(ctx.out);
  std::ofstream(ctx.path("config.json")) << to_json(ctx.config).dump(2) << '\n';
  return ctx;
}

void print_summary(const json& j) { std::cout << j.dump() << '\n'; }

json error_document(const std::string& type, const std::string& message,
                    const std::vector<std::string>& details = {}) {
  json e = {{"type", type}, {"message", message}};
  if (!details.empty()) e["violations"] = details;
  return {{"error", e}, {"tool", "evac"}, {"version", tool_version()}};
}

std::string lambda_label(double lambda) {
  std::ostringstream s;
  s.precision(4);
  s << lambda;
  return s.str();
}

// ---------------------------------------------------------------------------------------------

int cmd_distribution(const Context& ctx, std::vector<double> lambdas) {
  const ScenarioConfig& c = ctx.config;
  const auto prov = ctx.provenance("distribution");
  if (lambdas.empty()) lambdas = c.mixture_weights;
  std::vector<TripLengthDistribution> dists;
  std::optional<RiskField> field;
  if (c.zone.kind == "dumbbell") {
    lambdas = {1.0};
    dists.push_back(c.distribution(1.0, nullptr));
  } else {
    for (double l : lambdas) {
      if (l < 0.0 || l > 1.0) throw ConfigError({"--lambda values must lie in [0, 1]"});
      if (l < 1.0 && !field) field = c.risk_field();
      dists.push_back(c.distribution(l, field ? &*field : nullptr));
    }
  }

  json summary = {{"command", "distribution"}, {"zone", c.zone.kind}};
  json items = json::array();
  for (std::size_t i = 0; i < dists.size(); ++i) {
    dists[i].validate();
    const auto ifr = is_ifr(dists[i]);
    json item = {{"lambda", lambdas[i]},
                 {"ifr", ifr.ifr},
                 {"worst_relative_hazard_dip", ifr.worst_relative_dip},
                 {"support_km", dists[i].support_max()}};
    if (ifr.first_violation) item["first_violation_km"] = ifr.violation_distance;
    items.push_back(item);
    const std::string name = "distribution_lambda_" + lambda_label(lambdas[i]) + ".csv";
    write_csv(ctx.path(name), prov, "distance km; F 1; f 1/km; h 1/km",
              [&](std::ostream& out) { write_distribution_csv(out, dists[i]); });
  }
  summary["distributions"] = items;

  PlotSpec cdf{"Trip-length CDF", "distance (km)", "F", {}};
  PlotSpec hazard{"Hazard rate", "distance (km)", "h (1/km)", {}};
  for (std::size_t i = 0; i < dists.size(); ++i) {
    const std::string label = "lambda=" + lambda_label(lambdas[i]);
    cdf.series.push_back({label, dists[i].distance, dists[i].cdf});
    Series h{label, {}, {}};
    for (std::size_t k = 0; k < dists[i].size(); ++k) {
      if (std::isfinite(dists[i].hazard[k])) {
        h.x.push_back(dists[i].distance[k]);
        h.y.push_back(dists[i].hazard[k]);
      }
    }
    hazard.series.push_back(std::move(h));
  }
  write_svg(ctx.path("distribution_cdf.svg"), cdf, prov);
  write_svg(ctx.path("distribution_hazard.svg"), hazard, prov);
  write_json(ctx.path("distribution.json"), prov, summary);
  print_summary(summary);
  return kOk;
}

int cmd_capacities(const Context& ctx) {
  const auto prov = ctx.provenance("capacities");
  const auto report = capacity_report(ctx.config.bridges, ctx.config.total_vehicles());
  json bridges = json::array();
  for (const auto& b : report.bridges) {
    bridges.push_back({{"name", b.name},
                       {"formula_veh_h", b.formula},
                       {"stated_veh_h", b.stated},
                       {"used_veh_h", b.used},
                       {"mismatch", b.mismatch}});
  }
  json doc = {{"command", "capacities"},
              {"bridges", bridges},
              {"total_veh_h", report.total},
              {"formula_total_veh_h", report.formula_total},
              {"total_vehicles", ctx.config.total_vehicles()},
              {"clearance_bound_min", report.clearance_bound_min},
              {"stated_clearance_min", 95.0}};
  write_json(ctx.path("capacities.json"), prov, doc);
  print_summary(doc);
  return kOk;
}

int cmd_flood(const Context& ctx) {
  const auto prov = ctx.provenance("flood");
  const SurgeParams p = ctx.config.surge();
  const double crossing = crossing_time(p);
  const double published_h = 7.48;
  const double ratio_at_published = flooded_ratio(units::hours_to_seconds(published_h), p);

  Series front{"front x_f (km)", {}, {}};
  Series ratio{"flooded ratio", {}, {}};
  write_csv(ctx.path("flood_front.csv"), prov, "t s; x_f m; flooded ratio 1",
            [&](std::ostream& out) {
              out.precision(12);
              out << "t_s,x_front_m,flooded_ratio\n";
              const int n = 400;
              for (int i = 0; i <= n; ++i) {
                const double t = crossing * i / n;
                const double x = front_position(t, p);
                const double fr = flooded_ratio(t, p);
                out << t << ',' << x << ',' << fr << '\n';
                front.x.push_back(units::seconds_to_hours(t) * 60.0);
                front.y.push_back(units::m_to_km(x));
                ratio.x.push_back(units::seconds_to_hours(t) * 60.0);
                ratio.y.push_back(fr);
              }
            });
  const RiskField field = ctx.config.risk_field();
  write_csv(ctx.path("risk_field.csv"), prov, "x km; y km; weight 1/km^2",
            [&](std::ostream& out) { write_risk_field_csv(out, field); });
  write_csv(ctx.path("risk_radial_profile.csv"), prov, "r km; g 1/km^2",
            [&](std::ostream& out) { write_radial_profile_csv(out, field); });
  write_svg(ctx.path("flood_front.svg"), {"Surge front", "time (min)", "x_f (km)", {front}},
            prov);
  write_svg(ctx.path("flood_ratio.svg"), {"Flooded ratio", "time (min)", "fraction", {ratio}},
            prov);

  json doc = {{"command", "flood"},
              {"crossing_time_h", units::seconds_to_hours(crossing)},
              {"flooded_ratio_at_published_duration", ratio_at_published},
              {"published_duration_h", published_h},
              {"published_flooded_ratio", 0.682},
              {"note",
               "the published duration and ratio are not reproduced by the front formula with "
               "these parameters; both sets of values are reported"},
              {"risk_field_mass", field.mass()},
              {"arrival_floor_s", field.floor_s()},
              {"arrival_mode", ctx.config.flood.arrival_mode}};
  write_json(ctx.path("flood.json"), prov, doc);
  print_summary(doc);
  return kOk;
}

struct PolicyArgs {
  std::optional<double> cutoff_km;
  std::optional<double> switch_min;
  double lambda = 1.0;
  double alpha = 0.8;
};

BangBangPolicy policy_from(const PolicyArgs& a) {
  BangBangPolicy p;
  if (a.cutoff_km) p.cutoff_km = *a.cutoff_km;
  if (a.switch_min) p.switch_time_h = units::minutes_to_hours(*a.switch_min);
  return p;
}

TripLengthDistribution mixture(const ScenarioConfig& c, double lambda,
                               std::optional<RiskField>& field) {
  if (lambda < 0.0 || lambda > 1.0) throw ConfigError({"--lambda must lie in [0, 1]"});
  if (lambda < 1.0 && c.zone.kind == "disk" && !field) field = c.risk_field();
  return c.distribution(lambda, field ? &*field : nullptr);
}

int cmd_simulate(const Context& ctx, const PolicyArgs& args, std::size_t scenario) {
  const ScenarioConfig& c = ctx.config;
  const auto prov = ctx.provenance("simulate");
  std::optional<RiskField> field;
  const auto dist = mixture(c, args.lambda, field);
  const BangBangPolicy policy = policy_from(args);
  policy.validate(c.horizon_h);
  const NetworkParams net = c.network_params();
  GbmDemandSource source(c.demand_surface(dist), policy, c.gbm(), net.dt,
                         make_rng(c.seed, scenario), c.horizon_h);
  const auto trace =
      simulate(CohortState(std::span<const Cohort>{}), net, source, c.horizon_h + 12.0);
  write_csv(ctx.path("trace.csv"), prov, "t h; counts veh; speed km/h; delay veh h",
            [&](std::ostream& out) { write_trace_csv(out, trace); });
  Series active{"active", {}, {}};
  Series waiting{"waiting", {}, {}};
  for (const auto& pt : trace.points) {
    active.x.push_back(units::hours_to_minutes(pt.t));
    active.y.push_back(pt.active);
    waiting.x.push_back(units::hours_to_minutes(pt.t));
    waiting.y.push_back(pt.waiting);
  }
  write_svg(ctx.path("trace.svg"), {"Accumulation", "time (min)", "vehicles", {active, waiting}},
            prov);
  const auto rate = exit_rate_check(trace, net.exit_capacity, units::minutes_to_hours(5.0));
  json doc = {{"command", "simulate"},
              {"policy",
               {{"cutoff_km", std::isinf(policy.cutoff_km) ? json(nullptr) : json(policy.cutoff_km)},
                {"switch_min", units::hours_to_minutes(policy.switch_time_h)}}},
              {"lambda", args.lambda},
              {"scenario", scenario},
              {"delay_veh_h", trace.delay},
              {"mean_delay_min_per_vehicle",
               units::hours_to_minutes(trace.delay) / c.total_vehicles()},
              {"clearance_time_min", units::hours_to_minutes(trace.clearance_time)},
              {"released_veh", source.released()},
              {"exit_capacity_exceeded_5min", rate.exceeded},
              {"max_exit_rate_veh_h_5min", rate.max_rate}};
  write_json(ctx.path("simulate.json"), prov, doc);
  print_summary(doc);
  return kOk;
}

json optimization_json(const OptimizationResult& r, double alpha, double lambda) {
  return {{"alpha", alpha},
          {"lambda", lambda},
          {"x0_km", r.policy.cutoff_km},
          {"t_b_min", units::hours_to_minutes(r.policy.switch_time_h)},
          {"objective", r.objective},
          {"mean", r.mean},
          {"avar", r.avar},
          {"no_control_objective", r.no_control_objective},
          {"improvement_pct", 100.0 * (1.0 - r.objective / r.no_control_objective)},
          {"evaluations", r.evaluations},
          {"simulations", r.simulations}};
}

int cmd_optimize(const Context& ctx, const PolicyArgs& args, bool grid) {
  const ScenarioConfig& c = ctx.config;
  const auto prov = ctx.provenance(grid ? "optimize --grid" : "optimize");
  std::vector<double> lambdas = grid ? c.mixture_weights : std::vector<double>{args.lambda};
  std::vector<double> alphas = grid ? c.risk.alphas : std::vector<double>{args.alpha};
  std::optional<RiskField> field;
  std::shared_ptr<const NoiseBank> bank;
  json results = json::array();
  std::optional<OptimizationResult> single;
  for (double lambda : lambdas) {
    const auto dist = mixture(c, lambda, field);
    ScenarioSet set = c.scenario_set(dist);
    if (!bank || !bank->compatible(set)) bank = std::make_shared<const NoiseBank>(set);
    PolicyEvaluator evaluator(set, bank);
    for (double alpha : alphas) {
      auto res = optimize_bangbang(evaluator, c.risk.beta, alpha, c.search());
      results.push_back(optimization_json(res, alpha, lambda));
      single = std::move(res);
    }
  }
  if (grid) {
    write_csv(ctx.path("optimize_grid.csv"), prov,
              "t_b min; x0 km; objective veh h; improvement %", [&](std::ostream& out) {
                out.precision(10);
                out << "alpha,lambda,t_b_min,x0_km,objective,no_control_objective,"
                       "improvement_pct\n";
                for (const auto& r : results) {
                  out << r["alpha"].get<double>() << ',' << r["lambda"].get<double>() << ','
                      << r["t_b_min"].get<double>() << ',' << r["x0_km"].get<double>() << ','
                      << r["objective"].get<double>() << ','
                      << r["no_control_objective"].get<double>() << ','
                      << r["improvement_pct"].get<double>() << '\n';
                }
              });
  } else {
    // Objective landscape of the coarse grid for the single run.
    PlotSpec landscape{"Coarse-grid objective", "t_b (min)", "objective (veh h)", {}};
    std::map<double, Series> by_cutoff;
    for (const auto& s : single->grid) {
      auto& series = by_cutoff[s.policy.cutoff_km];
      series.label = "x0=" + lambda_label(s.policy.cutoff_km) + " km";
      series.x.push_back(units::hours_to_minutes(s.policy.switch_time_h));
      series.y.push_back(s.objective);
    }
    std::size_t i = 0;
    const std::size_t stride = std::max<std::size_t>(1, by_cutoff.size() / 5);
    for (auto& [cut, series] : by_cutoff) {
      if (i++ % stride == 0) landscape.series.push_back(std::move(series));
    }
    write_svg(ctx.path("optimize_landscape.svg"), landscape, prov);
  }
  json doc = {{"command", "optimize"},
              {"scenarios", c.scenarios},
              {"beta", c.risk.beta},
              {"results", results}};
  write_json(ctx.path("optimize.json"), prov, doc);
  print_summary(doc);
  return kOk;
}

int cmd_mpc(const Context& ctx, const PolicyArgs& args) {
  const ScenarioConfig& c = ctx.config;
  const auto prov = ctx.provenance("mpc");
  std::optional<RiskField> field;
  const auto dist = mixture(c, args.lambda, field);
  const auto result = mpc_run(c.mpc_problem(dist), c.mpc_config(args.alpha));
  write_csv(ctx.path("mpc.csv"), prov, "k step; t* min; x* km; active veh; waiting veh",
            [&](std::ostream& out) { write_mpc_csv(out, result); });
  write_svg(ctx.path("mpc_t_star.svg"),
            {"Averaged t*", "time (min)", "t* (min)",
             {{"t*", result.time_min, result.mean_t_star_min}}},
            prov);
  write_svg(ctx.path("mpc_x_star.svg"),
            {"Averaged x*", "time (min)", "x* (km)",
             {{"x*", result.time_min, result.mean_x_star_km}}},
            prov);
  json doc = {{"command", "mpc"},
              {"alpha", args.alpha},
              {"lambda", args.lambda},
              {"sigma", c.demand.volatility},
              {"realizations", result.runs.size()},
              {"failed", result.failed},
              {"mean_delay_veh_h", result.mean_delay},
              {"initial_t_star_min",
               result.mean_t_star_min.empty() ? 0.0 : result.mean_t_star_min.front()}};
  write_json(ctx.path("mpc.json"), prov, doc);
  print_summary(doc);
  return kOk;
}

int cmd_reproduce(const Context& ctx, const std::string& target, bool quick, bool strict) {
  const auto prov = ctx.provenance("reproduce " + target);
  ReproduceOptions opts;
  if (quick) {
    opts.monte_carlo_samples = 200'000;
    opts.table_scenarios = 100;
    opts.mpc_realizations = 20;
  }
  const auto results = run_target(target, ctx.config, opts);
  json checks = json::array();
  bool all = true;
  for (const auto& r : results) {
    checks.push_back(to_json(r));
    all = all && r.pass;
    std::cerr << (r.pass ? "PASS" : "FAIL") << "  [" << r.criterion << "] " << r.name << '\n';
    for (const auto& line : r.lines) std::cerr << "        " << line << '\n';
  }
  json doc = {{"command", "reproduce"},
              {"target", target},
              {"quick", quick},
              {"all_pass", all},
              {"checks", checks}};
  write_json(ctx.path("reproduce_" + target + ".json"), prov, doc);
  print_summary({{"command", "reproduce"},
                 {"target", target},
                 {"all_pass", all},
                 {"report", ctx.path("reproduce_" + target + ".json")}});
  return strict && !all ? kFailure : kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Staged-departure evacuation toolkit"};
  app.set_version_flag("--version", std::string(tool_version()));
  app.require_subcommand(1);
  GlobalOptions g;
  app.add_option("-c,--config", g.config_path, "JSON scenario file (defaults: Amager)")
      ->check(CLI::ExistingFile);
  app.add_option("--set", g.overrides, "Override a key, e.g. --set demand.volatility=0.1");
  app.add_option("--seed", g.seed, "Master random seed");
  app.add_option("-o,--out", g.out_dir, "Output directory")->capture_default_str();

  std::vector<double> dist_lambdas;
  auto* distribution = app.add_subcommand("distribution", "Trip-length CDF, density, hazard");
  distribution->add_option("--lambda", dist_lambdas, "Mixture weights (default: config)");

  auto* capacities = app.add_subcommand("capacities", "Bridge capacity reconstruction");
  auto* flood = app.add_subcommand("flood", "Surge front, flooded ratio and risk field");

  PolicyArgs pargs;
  std::size_t scenario = 0;
  auto* sim = app.add_subcommand("simulate", "One demand realization under a bang-bang policy");
  sim->add_option("--cutoff", pargs.cutoff_km, "Cutoff x0 in km (default: release all)");
  sim->add_option("--switch", pargs.switch_min, "Switch time t_b in minutes");
  sim->add_option("--lambda", pargs.lambda, "Mixture weight")->capture_default_str();
  sim->add_option("--scenario", scenario, "Demand stream index")->capture_default_str();

  bool grid = false;
  auto* opt = app.add_subcommand("optimize", "Bang-bang optimum of mean + beta AVaR");
  opt->add_option("--alpha", pargs.alpha, "AVaR level")->capture_default_str();
  opt->add_option("--lambda", pargs.lambda, "Mixture weight")->capture_default_str();
  opt->add_flag("--grid", grid, "Optimise every (alpha, lambda) pair of the config");

  auto* mpc = app.add_subcommand("mpc", "Receding-horizon control averaged over realizations");
  mpc->add_option("--alpha", pargs.alpha, "AVaR level")->capture_default_str();
  mpc->add_option("--lambda", pargs.lambda, "Mixture weight")->capture_default_str();

  std::string target = "all";
  bool quick = false;
  bool strict = false;
  auto* rep = app.add_subcommand("reproduce", "Run acceptance checks");
  rep->add_option("target", target, "counterexample | geometry | capacities | risk | "
                                    "conservation | propositions | tables | mpc-figures | "
                                    "flood | all")
      ->capture_default_str();
  rep->add_flag("--quick", quick, "Smaller sample sizes");
  rep->add_flag("--strict", strict, "Exit nonzero when a check fails");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << error_document("usage", e.what()).dump() << '\n';
    return kUsage;
  }

  try {
    const Context ctx = make_context(g);
    if (*distribution) return cmd_distribution(ctx, dist_lambdas);
    if (*capacities) return cmd_capacities(ctx);
    if (*flood) return cmd_flood(ctx);
    if (*sim) return cmd_simulate(ctx, pargs, scenario);
    if (*opt) return cmd_optimize(ctx, pargs, grid);
    if (*mpc) return cmd_mpc(ctx, pargs);
    if (*rep) return cmd_reproduce(ctx, target, quick, strict);
  } catch (const ConfigError& e) {
    std::cerr << error_document("config", e.what(), e.violations()).dump() << '\n';
    return kConfig;
  } catch (const DomainError& e) {
    std::cerr << error_document("domain", e.what()).dump() << '\n';
    return kDomain;
  } catch (const NumericalError& e) {
    std::cerr << error_document("numerical", e.what()).dump() << '\n';
    return kNumerical;
  } catch (const std::exception& e) {
    std::cerr << error_document("runtime", e.what()).dump() << '\n';
    return kFailure;
  }
  return kUsage;
}
