#include "evac/reproduce.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <limits>
#include <memory>
#include <numeric>
#include <random>

#include "evac/demand.hpp"
#include "evac/diagnostics.hpp"
#include "evac/dumbbell.hpp"
#include "evac/error.hpp"
#include "evac/evaluator.hpp"
#include "evac/flood.hpp"
#include "evac/geometry.hpp"
#include "evac/mpc.hpp"
#include "evac/optimizer.hpp"
#include "evac/risk.hpp"
#include "evac/units.hpp"

namespace evac {

namespace {

std::string format(const char* fmt, ...) {
  char buf[512];
  va_list args;
  va_start(args, fmt);
  std::vsnprintf(buf, sizeof buf, fmt, args);
  va_end(args);
  return buf;
}

const char* verdict(bool ok) { return ok ? "ok" : "FAILED"; }

/// Times a check body and folds the runtime budget into the verdict.
CheckResult timed(int criterion, std::string name, double budget_s,
                  const std::function<bool(CheckResult&)>& body) {
  CheckResult r;
  r.criterion = criterion;
  r.name = std::move(name);
  r.budget_s = budget_s;
  const auto start = std::chrono::steady_clock::now();
  const bool ok = body(r);
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const bool in_time = r.seconds <= budget_s;
  r.lines.push_back(format("runtime %.2f s (budget %.0f s): %s", r.seconds, budget_s,
                           verdict(in_time)));
  r.pass = ok && in_time;
  return r;
}

/// Releases batch i once the cumulative completed count reaches thresholds[i].
class ThresholdSource final : public DemandSource {
public:
  ThresholdSource(std::vector<std::vector<Cohort>> batches, std::vector<double> thresholds)
      : batches_(std::move(batches)), thresholds_(std::move(thresholds)) {
    for (const auto& b : batches_) {
      for (const Cohort& c : b) waiting_ += c.count;
    }
  }

  std::vector<Cohort> release(double t, const CohortState& state) override {
    std::vector<Cohort> out;
    while (next_ < batches_.size() &&
           state.completed() >= thresholds_[next_] - 1e-12) {
      for (const Cohort& c : batches_[next_]) {
        if (c.count <= 0.0) continue;
        out.push_back(c);
        waiting_ -= c.count;
      }
      release_times_.push_back(t);
      ++next_;
    }
    if (next_ == batches_.size()) waiting_ = 0.0;
    return out;
  }
  double waiting(double) const override { return waiting_; }
  bool exhausted(double) const override { return next_ == batches_.size(); }
  const std::vector<double>& release_times() const { return release_times_; }

private:
  std::vector<std::vector<Cohort>> batches_;
  std::vector<double> thresholds_;
  std::size_t next_ = 0;
  double waiting_ = 0.0;
  std::vector<double> release_times_;
};

NetworkParams unit_linear_network() {
  NetworkParams p;
  p.lane_km = 1.0;
  p.model = SpeedDensityModel::linear(1.0, 1.0);
  p.exit_capacity = std::numeric_limits<double>::infinity();
  p.dt = 0.25;
  return p;
}

bool conserved(const SimulationTrace& trace, double* worst) {
  bool ok = true;
  for (const TracePoint& p : trace.points) {
    const double gap = std::abs(p.injected - p.active - p.completed);
    const double scale = std::max(1.0, p.injected);
    if (worst) *worst = std::max(*worst, gap / scale);
    if (gap > 1e-9 * scale) ok = false;
  }
  return ok;
}

/// Empirical nearest-exit CDF of uniform origins on the disk.
std::vector<double> monte_carlo_cdf(const DiskZone& zone, std::span<const double> d_grid,
                                    std::size_t samples, std::uint64_t seed) {
  Rng rng = make_rng(seed, 0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> dist(samples);
  for (auto& v : dist) {
    const double r = zone.radius() * std::sqrt(u(rng));
    const double th = 2.0 * units::kPi * u(rng);
    v = zone.min_distance({r * std::cos(th), r * std::sin(th)});
  }
  std::sort(dist.begin(), dist.end());
  std::vector<double> out;
  out.reserve(d_grid.size());
  for (double d : d_grid) {
    auto it = std::upper_bound(dist.begin(), dist.end(), d);
    out.push_back(static_cast<double>(it - dist.begin()) / static_cast<double>(samples));
  }
  return out;
}

bool non_increasing(std::span<const double> xs, double slack) {
  for (std::size_t i = 1; i < xs.size(); ++i) {
    if (xs[i] > xs[i - 1] + slack) return false;
  }
  return true;
}

bool non_decreasing(std::span<const double> xs, double slack) {
  for (std::size_t i = 1; i < xs.size(); ++i) {
    if (xs[i] < xs[i - 1] - slack) return false;
  }
  return true;
}

std::string min_sec(double minutes) {
  const auto total = static_cast<long>(std::llround(minutes * 60.0));
  return format("%ld'%02ld\"", total / 60, total % 60);
}

}  // namespace

nlohmann::json to_json(const CheckResult& r) {
  return {{"criterion", r.criterion}, {"name", r.name},       {"pass", r.pass},
          {"seconds", r.seconds},     {"budget_s", r.budget_s}, {"lines", r.lines},
          {"data", r.data}};
}

CounterexampleRun counterexample_run(double epsilon) {
  if (!(epsilon >= 0.0) || epsilon >= 1.0 / 3.0) {
    throw DomainError("epsilon must lie in [0, 1/3)");
  }
  const double third = 1.0 / 3.0;
  std::vector<std::vector<Cohort>> batches{
      {{third, 1.0, 0}, {epsilon, 10.0, 1}},
      {{third - epsilon, 10.0, 1}},
      {{third, 19.0, 2}},
  };
  ThresholdSource source(batches, {0.0, third, 2.0 * third});
  const NetworkParams net = unit_linear_network();
  auto trace = simulate(CohortState(std::span<const Cohort>{}), net, source, 200.0);

  CounterexampleRun run;
  run.delay = trace.delay;
  if (epsilon == 0.0) {
    const auto& rel = source.release_times();
    for (std::size_t i = 0; i < 3 && i < trace.completions.size() && i < rel.size(); ++i) {
      run.travel_h[i] = trace.completions[i].time - rel[i];
    }
  }
  run.trace = std::move(trace);
  return run;
}

double counterexample_derivative(double epsilon) {
  if (!(epsilon > 0.0)) throw DomainError("epsilon must be positive");
  return (counterexample_run(epsilon).delay - counterexample_run(0.0).delay) / epsilon;
}

SmallInstance canonical_small_instance(double total, double slot_h) {
  SmallInstance in;
  in.demand.edges = {0.0, 1.0, 2.0, 3.0, 4.0};
  in.demand.mass.assign(4, total / 4.0);
  in.network = unit_linear_network();
  in.network.dt = slot_h / 20.0;
  in.time_slots = 4;
  in.slot_h = slot_h;
  return in;
}

CheckResult check_counterexample(const ScenarioConfig&, const ReproduceOptions&) {
  return timed(1, "counterexample exactness", 1.0, [](CheckResult& r) {
    const auto base = counterexample_run(0.0);
    const std::array<double, 3> expected{1.5, 15.0, 28.5};
    bool times_ok = true;
    for (std::size_t i = 0; i < 3; ++i) {
      times_ok = times_ok && std::abs(base.travel_h[i] - expected[i]) <= 1e-6;
    }
    r.lines.push_back(format("travel times %.9f, %.9f, %.9f vs 1.5, 15, 28.5 (tol 1e-6): %s",
                             base.travel_h[0], base.travel_h[1], base.travel_h[2],
                             verdict(times_ok)));
    const double eps = 1e-3;
    const double deriv = counterexample_derivative(eps);
    const bool deriv_ok = std::abs(deriv - 6.75) <= 0.05 * 6.75;
    r.lines.push_back(format("delay derivative at eps=1e-3: %.6f vs 6.75 +- 5%%: %s", deriv,
                             verdict(deriv_ok)));
    r.lines.push_back(format("baseline delay D(0) = %.9f veh h", base.delay));
    r.data = {{"travel_h", base.travel_h},
              {"delay", base.delay},
              {"epsilon", eps},
              {"derivative", deriv},
              {"expected_derivative", 6.75}};
    return times_ok && deriv_ok;
  });
}

CheckResult check_geometry_constants(const ScenarioConfig& config, const ReproduceOptions&) {
  return timed(2, "geometry constants", 1.0, [&](CheckResult& r) {
    const DiskZone zone = config.disk();
    const auto gaps = zone.gaps();
    const std::array<double, 3> expected{0.914, 0.855, 4.516};
    bool gaps_ok = gaps.size() == 3;
    for (std::size_t i = 0; gaps_ok && i < 3; ++i) {
      gaps_ok = std::abs(gaps[i] - expected[i]) <= 0.002;
    }
    if (gaps.size() == 3) {
      r.lines.push_back(format("angular gaps %.4f, %.4f, %.4f vs 0.914, 0.855, 4.516 (tol "
                               "0.002): %s",
                               gaps[0], gaps[1], gaps[2], verdict(gaps_ok)));
    } else {
      r.lines.push_back(format("expected 3 exits, found %zu: FAILED", gaps.size()));
    }

    struct Published {
      const char* name;
      Point c;
      double angle_deg;
      bool exit;
    };
    const std::array<Published, 4> published{{
        {"Knippelsbro", {-0.281, 5.533}, 92.9, true},
        {"Langebro", {-0.505, 3.207}, 99.0, false},
        {"Sjaellandsbroen", {-4.555, 3.153}, 145.3, true},
        {"Amagermotorvejen", {-5.367, -1.372}, 194.3, true},
    }};
    bool coords_ok = true;
    nlohmann::json coords = nlohmann::json::array();
    for (const auto& p : published) {
      const double n = norm(p.c);
      double ang = units::rad_to_deg(std::atan2(p.c.y, p.c.x));
      if (ang < 0.0) ang += 360.0;
      const bool on_circle = std::abs(n - zone.radius()) <= 0.01;
      const bool angle_ok = std::abs(ang - p.angle_deg) <= 0.05;
      if (p.exit) {
        coords_ok = coords_ok && on_circle && angle_ok;
        r.lines.push_back(format("%s |c| = %.4f km, angle %.2f deg: %s", p.name, n, ang,
                                 verdict(on_circle && angle_ok)));
      } else {
        r.lines.push_back(format("%s |c| = %.4f km, angle %.2f deg (not a model exit, "
                                 "not asserted)",
                                 p.name, n, ang));
      }
      coords.push_back({{"name", p.name}, {"norm_km", n}, {"angle_deg", ang}, {"exit", p.exit}});
    }
    r.data = {{"gaps_rad", gaps}, {"coordinates", coords}};
    return gaps_ok && coords_ok;
  });
}

CheckResult check_distribution(const ScenarioConfig& config, const ReproduceOptions& options) {
  return timed(3, "distribution correctness", 30.0, [&](CheckResult& r) {
    const DiskZone zone = config.disk();
    const auto grid = uniform_grid(0.0, zone.max_min_distance(), 201);
    const auto mc = monte_carlo_cdf(zone, grid, options.monte_carlo_samples, config.seed);
    double sup = 0.0;
    double at = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double diff = std::abs(cdf_uniform(grid[i], zone) - mc[i]);
      if (diff > sup) {
        sup = diff;
        at = grid[i];
      }
    }
    const bool mc_ok = sup <= 0.005;
    r.lines.push_back(format("sup |F - F_mc| = %.5f at d = %.3f km (%zu samples, tol 0.005): %s",
                             sup, at, options.monte_carlo_samples, verdict(mc_ok)));

    const double d = 0.1;
    const double f = cdf_uniform(d, zone);
    const double r2 = zone.radius() * zone.radius();
    const double asymptote = static_cast<double>(zone.exit_count()) * d * d / (2.0 * r2);
    const double published_coeff = static_cast<double>(zone.exit_count()) * d * d / (units::kPi * r2);
    const double rel = std::abs(f / asymptote - 1.0);
    const bool small_ok = rel <= 0.05;
    r.lines.push_back(format("F(0.1) = %.6e vs n d^2/(2R^2) = %.6e, rel %.4f (tol 0.05): %s", f,
                             asymptote, rel, verdict(small_ok)));
    r.lines.push_back(format("coefficient n d^2/(pi R^2) = %.6e gives ratio %.4f (reported only)",
                             published_coeff, f / published_coeff));
    r.data = {{"sup_norm", sup},           {"sup_at_km", at},
              {"samples", options.monte_carlo_samples},
              {"F_0_1", f},                {"asymptote", asymptote},
              {"published_coefficient_value", published_coeff}};
    return mc_ok && small_ok;
  });
}

CheckResult check_hazard(const ScenarioConfig& config, const ReproduceOptions&) {
  return timed(4, "hazard structure", 60.0, [&](CheckResult& r) {
    const auto disk = config.distribution(1.0, nullptr);
    const auto disk_ifr = is_ifr(disk);
    r.lines.push_back(format("disk (%zu exits) is_ifr = %s, worst relative hazard dip %.4f at "
                             "%.3f km: %s",
                             config.disk().exit_count(), disk_ifr.ifr ? "true" : "false",
                             disk_ifr.worst_relative_dip, disk_ifr.violation_distance,
                             verdict(disk_ifr.ifr)));

    const double single_angle = config.zone.exit_angles_deg.front();
    ScenarioConfig one = config;
    one.zone.exit_angles_deg = {single_angle};
    const auto single = is_ifr(one.distribution(1.0, nullptr));
    r.lines.push_back(format("single-exit disk is_ifr = %s, worst dip %.2e (supplementary)",
                             single.ifr ? "true" : "false", single.worst_relative_dip));

    const auto bell = dumbbell_distribution(config.zone.dumbbell);
    const auto bell_ifr = is_ifr(bell);
    const bool bell_ok = !bell_ifr.ifr && bell_ifr.violation_distance > 1.0 &&
                         bell_ifr.violation_distance < 5.0;
    r.lines.push_back(format("dumbbell is_ifr = %s, first violation at %.3f km (want inside "
                             "(1, 5)): %s",
                             bell_ifr.ifr ? "true" : "false", bell_ifr.violation_distance,
                             verdict(bell_ok)));
    r.data = {{"disk_ifr", disk_ifr.ifr},
              {"disk_worst_dip", disk_ifr.worst_relative_dip},
              {"disk_violation_km", disk_ifr.violation_distance},
              {"single_exit_ifr", single.ifr},
              {"dumbbell_ifr", bell_ifr.ifr},
              {"dumbbell_violation_km", bell_ifr.violation_distance}};
    return disk_ifr.ifr && bell_ok;
  });
}

CheckResult check_capacities(const ScenarioConfig& config, const ReproduceOptions&) {
  return timed(5, "capacity arithmetic", 1.0, [&](CheckResult& r) {
    const auto report = capacity_report(amager_bridges(), config.total_vehicles());
    bool ok = true;
    auto expect = [&](const std::string& name, double formula, bool mismatch) {
      for (const auto& b : report.bridges) {
        if (b.name != name) continue;
        const bool good = b.formula == formula && b.mismatch == mismatch;
        ok = ok && good;
        r.lines.push_back(format("%s formula %.0f stated %.0f%s: %s", name.c_str(), b.formula,
                                 b.stated, b.mismatch ? " (mismatch flagged)" : "",
                                 verdict(good)));
        return;
      }
      ok = false;
      r.lines.push_back(name + " missing: FAILED");
    };
    expect("E20", 16800.0, false);
    expect("Langebro", 22000.0, false);
    expect("Knippelsbro", 10000.0, false);
    expect("Kalvebod", 26400.0, true);
    const bool total_ok = report.total == 80000.0;
    ok = ok && total_ok;
    r.lines.push_back(format("total with stated values %.0f veh/h: %s", report.total,
                             verdict(total_ok)));
    r.lines.push_back(format("clearance bound N / C = %.1f min (reported only)",
                             report.clearance_bound_min));
    r.data = {{"total", report.total},
              {"formula_total", report.formula_total},
              {"clearance_bound_min", report.clearance_bound_min}};
    return ok;
  });
}

CheckResult check_avar(const ScenarioConfig& config, const ReproduceOptions&) {
  return timed(6, "AVaR correctness", 5.0, [&](CheckResult& r) {
    const std::vector<double> five{1, 2, 3, 4, 5};
    const double a08 = avar(five, 0.8);
    const double a0 = avar(five, 0.0);
    const bool fixed_ok = std::abs(a08 - 5.0) <= 1e-12 && std::abs(a0 - 3.0) <= 1e-12;
    r.lines.push_back(format("{1..5}: AVaR_0.8 = %.12g, AVaR_0 = %.12g: %s", a08, a0,
                             verdict(fixed_ok)));

    Rng rng = make_rng(config.seed, 6);
    std::uniform_int_distribution<int> size(1, 60);
    std::lognormal_distribution<double> value(0.0, 1.0);
    const std::vector<double> alphas{0.0, 0.1, 0.3, 0.5, 0.8, 0.9, 0.95, 0.99};
    double worst_oracle = 0.0;
    bool coherent = true;
    bool monotone = true;
    const int vectors = 300;
    for (int v = 0; v < vectors; ++v) {
      std::vector<double> xs(static_cast<std::size_t>(size(rng)));
      for (auto& x : xs) x = value(rng);
      const double m = mean(xs);
      double prev = -std::numeric_limits<double>::infinity();
      for (double a : alphas) {
        const double got = avar(xs, a);
        // The Rockafellar-Uryasev minimum over eta is attained at a sample point.
        double oracle = std::numeric_limits<double>::infinity();
        for (double eta : xs) oracle = std::min(oracle, ru_function(xs, a, eta));
        worst_oracle = std::max(worst_oracle, std::abs(got - oracle) / std::max(1.0, oracle));
        coherent = coherent && got >= m - 1e-12 * std::max(1.0, m);
        monotone = monotone && got >= prev - 1e-12 * std::max(1.0, got);
        prev = got;
      }
    }
    const bool oracle_ok = worst_oracle <= 1e-6;
    r.lines.push_back(format("%d random vectors: max |AVaR - min_eta RU| = %.2e (tol 1e-6): %s",
                             vectors, worst_oracle, verdict(oracle_ok)));
    r.lines.push_back(format("AVaR >= mean on all: %s; non-decreasing in alpha: %s",
                             verdict(coherent), verdict(monotone)));
    r.data = {{"avar_0_8", a08}, {"avar_0", a0}, {"oracle_error", worst_oracle}};
    return fixed_ok && oracle_ok && coherent && monotone;
  });
}

CheckResult check_conservation(const ScenarioConfig& config, const ReproduceOptions&) {
  return timed(7, "conservation and convergence", 60.0, [&](CheckResult& r) {
    double worst = 0.0;
    std::size_t traces = 0;
    bool conserve_ok = true;
    for (double eps : {0.0, 1e-3, 0.1}) {
      conserve_ok = conserved(counterexample_run(eps).trace, &worst) && conserve_ok;
      ++traces;
    }

    const auto dist = config.distribution(1.0, nullptr);
    const std::vector<BangBangPolicy> policies{BangBangPolicy::no_control(), {4.5, 0.05}};
    const NetworkParams net = config.network_params();
    const DemandSurface surface = config.demand_surface(dist);
    for (const auto& policy : policies) {
      for (std::uint64_t s = 0; s < 3; ++s) {
        GbmDemandSource source(surface, policy, config.gbm(), net.dt, make_rng(config.seed, s),
                               config.horizon_h);
        auto trace = simulate(CohortState(std::span<const Cohort>{}), net, source, config.horizon_h + 12.0);
        conserve_ok = conserved(trace, &worst) && conserve_ok;
        ++traces;
      }
    }
    r.lines.push_back(format("injected = active + completed on %zu traces, worst relative gap "
                             "%.2e (tol 1e-9): %s",
                             traces, worst, verdict(conserve_ok)));

    // Noise streams are not comparable across step sizes, so the step study is deterministic.
    bool converge_ok = true;
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& policy : policies) {
      double delays[2];
      for (int half = 0; half < 2; ++half) {
        ScenarioConfig c = config;
        c.demand.volatility = 0.0;
        c.scenarios = 1;
        if (half) c.network.dt_s *= 0.5;
        auto res = evaluate_policy(policy, c.scenario_set(dist), c.risk.beta, 0.8);
        delays[half] = res.mean;
      }
      const double rel = std::abs(delays[1] / delays[0] - 1.0);
      const bool ok = rel < 0.01;
      converge_ok = converge_ok && ok;
      const std::string label =
          std::isinf(policy.cutoff_km) ? std::string("no control")
                                       : format("x0=%.1f km, t_b=%.0f min", policy.cutoff_km,
                                                units::hours_to_minutes(policy.switch_time_h));
      r.lines.push_back(format("%s: D(dt) = %.2f, D(dt/2) = %.2f veh h, change %.4f%% (tol 1%%): "
                               "%s",
                               label.c_str(), delays[0], delays[1], 100.0 * rel, verdict(ok)));
      rows.push_back({{"policy", label}, {"delay_dt", delays[0]}, {"delay_half_dt", delays[1]},
                      {"relative_change", rel}});
    }
    r.data = {{"worst_conservation_gap", worst}, {"step_study", rows}};
    return conserve_ok && converge_ok;
  });
}

CheckResult check_propositions(const ScenarioConfig&, const ReproduceOptions&) {
  return timed(8, "proposition oracles", 120.0, [](CheckResult& r) {
    const SmallInstance in = canonical_small_instance();
    const auto best = brute_force_optimal(in);
    const bool thr = is_threshold_in_x(best.control);
    const bool mono = is_monotone_release(best.release_slot);
    const bool single = is_single_switch(best.release_slot);
    const bool held = std::any_of(best.release_slot.begin(), best.release_slot.end(),
                                  [](std::size_t s) { return s > 0; });
    std::string tau;
    for (std::size_t s : best.release_slot) tau += format(" %zu", s);
    r.lines.push_back(format("canonical 4x4 (N=0.6, slot=1): %zu grids, %zu release maps, optimum "
                             "slots [%s ], delay %.6f",
                             best.grids_enumerated, best.distinct_maps, tau.c_str(), best.delay));
    r.lines.push_back(format("threshold-in-x %s, monotone-in-tau %s, single-switch %s, "
                             "non-trivial %s",
                             verdict(thr), verdict(mono), verdict(single), verdict(held)));

    // Family sweep for context; only the canonical instance is asserted.
    std::size_t total = 0;
    std::size_t n_thr = 0;
    std::size_t n_mono = 0;
    std::size_t n_single = 0;
    nlohmann::json sweep = nlohmann::json::array();
    for (double n : {0.3, 0.5, 0.6, 0.7, 0.8, 0.9}) {
      for (double slot : {0.25, 0.5, 1.0, 2.0, 3.0, 5.0}) {
        const auto res = brute_force_optimal(canonical_small_instance(n, slot));
        const bool t = is_threshold_in_x(res.control);
        const bool m = is_monotone_release(res.release_slot);
        const bool s = is_single_switch(res.release_slot);
        ++total;
        n_thr += t;
        n_mono += m;
        n_single += s;
        sweep.push_back({{"total", n},
                         {"slot_h", slot},
                         {"release_slot", res.release_slot},
                         {"threshold", t},
                         {"monotone", m},
                         {"single_switch", s}});
      }
    }
    r.lines.push_back(format("sweep of %zu instances (reported only): threshold %zu, monotone "
                             "%zu, single-switch %zu",
                             total, n_thr, n_mono, n_single));
    r.data = {{"release_slot", best.release_slot},
              {"delay", best.delay},
              {"grids", best.grids_enumerated},
              {"sweep", sweep}};
    return thr && mono && single && held;
  });
}

CheckResult check_tables(const ScenarioConfig& config, const ReproduceOptions& options) {
  return timed(9, "optimization benefit", 900.0, [&](CheckResult& r) {
    ScenarioConfig c = config;
    c.scenarios = options.table_scenarios;
    const RiskField field = c.risk_field();
    // Published values per (alpha row, lambda column): t* in minutes, x* km, improvement.
    const double published_t[3][3] = {{14 + 16 / 60.0, 18 + 8 / 60.0, 9 + 11 / 60.0},
                                  {10 + 27 / 60.0, 10 + 5 / 60.0, 9 + 1 / 60.0},
                                  {9 + 25 / 60.0, 7 + 21 / 60.0, 8 + 5 / 60.0}};
    const double published_x[3][3] = {{10.96, 11.06, 11.07}, {10.47, 10.73, 11.07},
                                  {10.03, 10.68, 11.08}};
    const double published_impr[3][3] = {{24.4, 23.9, 26.7}, {24.7, 25.7, 29.6}, {27.4, 16.4, 25.1}};

    std::shared_ptr<const NoiseBank> bank;
    bool ok = true;
    double sum_impr = 0.0;
    nlohmann::json grid = nlohmann::json::array();
    for (std::size_t li = 0; li < c.mixture_weights.size(); ++li) {
      const double lambda = c.mixture_weights[li];
      const auto dist = c.distribution(lambda, &field);
      ScenarioSet set = c.scenario_set(dist);
      if (!bank || !bank->compatible(set)) bank = std::make_shared<const NoiseBank>(set);
      PolicyEvaluator evaluator(set, bank);
      for (std::size_t ai = 0; ai < c.risk.alphas.size(); ++ai) {
        const double alpha = c.risk.alphas[ai];
        const auto res = optimize_bangbang(evaluator, c.risk.beta, alpha, c.search());
        const double impr = 100.0 * (1.0 - res.objective / res.no_control_objective);
        const bool cell_ok = impr >= 15.0;
        ok = ok && cell_ok;
        sum_impr += impr;
        const double per_vehicle = units::hours_to_minutes(res.mean) / c.total_vehicles();
        nlohmann::json row = {{"alpha", alpha},
                              {"lambda", lambda},
                              {"t_star_min", units::hours_to_minutes(res.policy.switch_time_h)},
                              {"x_star_km", res.policy.cutoff_km},
                              {"objective", res.objective},
                              {"no_control_objective", res.no_control_objective},
                              {"improvement_pct", impr},
                              {"mean_delay_per_vehicle_min", per_vehicle},
                              {"evaluations", res.evaluations}};
        std::string published;
        if (ai < 3 && li < 3) {
          row["published_t_star_min"] = published_t[ai][li];
          row["published_x_star_km"] = published_x[ai][li];
          row["published_improvement_pct"] = published_impr[ai][li];
          published = format(" | published (%s, %.2f) %.1f%%", min_sec(published_t[ai][li]).c_str(),
                         published_x[ai][li], published_impr[ai][li]);
        }
        grid.push_back(row);
        r.lines.push_back(format("alpha=%.2f lambda=%.2f: (%s, %.2f km) improvement %.1f%% "
                                 "(min 15%%)%s: %s",
                                 alpha, lambda,
                                 min_sec(units::hours_to_minutes(res.policy.switch_time_h)).c_str(),
                                 res.policy.cutoff_km, impr, published.c_str(), verdict(cell_ok)));
      }
    }
    const double avg = sum_impr / static_cast<double>(grid.size());
    r.lines.push_back(format("average improvement %.1f%% (published 27%%, not asserted)", avg));
    r.data = {{"scenarios", c.scenarios}, {"grid", grid}, {"average_improvement_pct", avg}};
    return ok;
  });
}

CheckResult check_mpc(const ScenarioConfig& config, const ReproduceOptions& options) {
  return timed(10, "MPC qualitative", 1200.0, [&](CheckResult& r) {
    const double alpha = 0.8;
    std::vector<MpcResult> runs;
    std::vector<double> sigmas{0.03, 0.1};
    bool ok = true;
    double support = 0.0;
    for (double sigma : sigmas) {
      ScenarioConfig c = config;
      c.demand.volatility = sigma;
      c.mpc.realizations = options.mpc_realizations;
      const auto dist = c.distribution(1.0, nullptr);
      support = dist.support_max();
      runs.push_back(mpc_run(c.mpc_problem(dist), c.mpc_config(alpha)));
      const MpcResult& m = runs.back();
      const double t0 = m.mean_t_star_min.empty() ? 0.0 : m.mean_t_star_min.front();
      const bool t_mono = non_increasing(m.mean_t_star_min, 0.02 * t0);
      double zero_at = std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < m.mean_t_star_min.size(); ++k) {
        if (m.mean_t_star_min[k] <= 1e-12) {
          zero_at = m.time_min[k];
          break;
        }
      }
      const bool zero_ok = zero_at <= 30.0;
      const bool x_mono = non_decreasing(m.mean_x_star_km, 0.02 * support);
      ok = ok && t_mono && zero_ok && x_mono && m.failed == 0;
      r.lines.push_back(format("sigma=%.2f: %zu realizations (%zu failed), t*(0) = %.2f min, "
                               "t* non-increasing (2%% slack) %s, t* = 0 at %.0f min (<= 30) %s, "
                               "x* non-decreasing %s, mean delay %.1f veh h",
                               sigma, m.runs.size(), m.failed, t0, verdict(t_mono), zero_at,
                               verdict(zero_ok), verdict(x_mono), m.mean_delay));
    }
    // Pointwise difference of the averaged trajectories; t* is compared on the scale of its
    // largest value because it is zero after full release.
    const MpcResult& a = runs[0];
    const MpcResult& b = runs[1];
    const std::size_t n = std::min(a.time_min.size(), b.time_min.size());
    double t_scale = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      t_scale = std::max({t_scale, a.mean_t_star_min[k], b.mean_t_star_min[k]});
    }
    double worst_t = 0.0;
    double worst_x = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      if (t_scale > 0.0) {
        worst_t = std::max(worst_t,
                           std::abs(a.mean_t_star_min[k] - b.mean_t_star_min[k]) / t_scale);
      }
      const double xs = std::max(a.mean_x_star_km[k], b.mean_x_star_km[k]);
      if (xs > 0.0) {
        worst_x = std::max(worst_x, std::abs(a.mean_x_star_km[k] - b.mean_x_star_km[k]) / xs);
      }
    }
    const bool diff_ok = worst_t < 0.15 && worst_x < 0.15;
    ok = ok && diff_ok;
    r.lines.push_back(format("sigma 0.03 vs 0.1: max |dt*| / max t* = %.3f, max relative dx* = "
                             "%.3f (tol 0.15): %s",
                             worst_t, worst_x, verdict(diff_ok)));
    nlohmann::json traj = nlohmann::json::array();
    for (std::size_t i = 0; i < runs.size(); ++i) {
      traj.push_back({{"sigma", sigmas[i]},
                      {"time_min", runs[i].time_min},
                      {"mean_t_star_min", runs[i].mean_t_star_min},
                      {"mean_x_star_km", runs[i].mean_x_star_km},
                      {"mean_delay", runs[i].mean_delay}});
    }
    r.data = {{"trajectories", traj},
              {"max_t_difference", worst_t},
              {"max_x_difference", worst_x},
              {"support_km", support}};
    return ok;
  });
}

CheckResult check_flood(const ScenarioConfig& config, const ReproduceOptions& options) {
  return timed(11, "flood properties", 10.0, [&](CheckResult& r) {
    const SurgeParams p = config.surge();
    const double radius = p.radius_m;
    const double crossing = crossing_time(p);

    bool decreasing = true;
    double prev = front_position(0.0, p);
    const int n_t = 2000;
    for (int i = 1; i <= n_t; ++i) {
      const double x = front_position(crossing * i / n_t, p);
      decreasing = decreasing && x < prev;
      prev = x;
    }
    r.lines.push_back(format("x_f strictly decreasing on %d points up to %.1f s: %s", n_t,
                             crossing, verdict(decreasing)));

    const double t_rim = arrival_time(radius, p);
    const bool rim_ok = t_rim == 0.0;
    r.lines.push_back(format("t_f(R) = %.3g s: %s", t_rim, verdict(rim_ok)));

    double worst_trip = 0.0;
    for (int i = 0; i <= 200; ++i) {
      const double x = radius - 2.0 * radius * i / 200.0;
      worst_trip = std::max(worst_trip, std::abs(front_position(arrival_time(x, p), p) - x));
    }
    const bool trip_ok = worst_trip <= 1e-4 * radius;
    r.lines.push_back(format("round trip max |x_f(t_f(x)) - x| = %.3e m (tol %.3e): %s",
                             worst_trip, 1e-4 * radius, verdict(trip_ok)));

    const RiskField field = config.risk_field();
    const double mass = field.mass();
    const bool mass_ok = std::abs(mass - 1.0) <= 1e-6;
    r.lines.push_back(format("risk field mass %.9f (tol 1e-6): %s", mass, verdict(mass_ok)));

    const std::size_t samples = std::max<std::size_t>(100'000, options.monte_carlo_samples / 10);
    Rng rng = make_rng(config.seed, 11);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> xs;
    xs.reserve(samples);
    while (xs.size() < samples) {
      const double x = u(rng);
      const double y = u(rng);
      if (x * x + y * y <= 1.0) xs.push_back(x);
    }
    std::sort(xs.begin(), xs.end());
    double worst_mc = 0.0;
    for (double frac : {-0.9, -0.5, -0.2, 0.0, 0.3, 0.6, 0.95}) {
      const double front = frac * radius;
      const auto above = static_cast<double>(xs.end() - std::lower_bound(xs.begin(), xs.end(), frac));
      worst_mc = std::max(worst_mc, std::abs(segment_area_fraction(front, radius) -
                                             above / static_cast<double>(samples)));
    }
    const bool mc_ok = worst_mc <= 0.003;
    r.lines.push_back(format("segment formula vs %zu-point Monte Carlo: max diff %.5f (tol "
                             "0.003): %s",
                             samples, worst_mc, verdict(mc_ok)));

    const double published_h = 7.48;
    const double ratio_at_published = flooded_ratio(units::hours_to_seconds(published_h), p);
    r.lines.push_back(format("computed crossing %.3f h vs published 7.48 h; flooded ratio at 7.48 h "
                             "%.1f%% vs published 68.2%% (mismatch reported, not asserted)",
                             units::seconds_to_hours(crossing), 100.0 * ratio_at_published));
    r.data = {{"crossing_time_h", units::seconds_to_hours(crossing)},
              {"published_duration_h", published_h},
              {"flooded_ratio_at_published_duration", ratio_at_published},
              {"published_flooded_ratio", 0.682},
              {"round_trip_error_m", worst_trip},
              {"risk_mass", mass},
              {"monte_carlo_error", worst_mc}};
    return decreasing && rim_ok && trip_ok && mass_ok && mc_ok;
  });
}

CheckResult check_costate(const ScenarioConfig& config, const ReproduceOptions&) {
  return timed(12, "costate diagnostic", 30.0, [&](CheckResult& r) {
    const auto dist = config.distribution(1.0, nullptr);
    const double lane_km = config.network.lane_km;
    const double headway_h = units::seconds_to_hours(config.headway_s);
    const auto queue = uniform_grid(0.0, config.total_vehicles(), 401);

    const auto diag = service_rate(dist, config.model(), lane_km, headway_h, queue);
    const double viol = diag.concavity_violation();
    const bool concave = viol <= 1e-6;
    r.lines.push_back(format("S concave on the %s model: max scaled second difference %.3e "
                             "(tol 1e-6): %s",
                             to_string(config.model().kind()), viol, verdict(concave)));
    const auto linear = SpeedDensityModel::linear(config.network.free_flow_speed_kmh,
                                                  config.network.jam_density_veh_km_lane);
    const double viol_lin = service_rate(dist, linear, lane_km, headway_h, queue)
                                .concavity_violation();
    r.lines.push_back(format("S on the linear model: max scaled second difference %.3e "
                             "(supplementary)",
                             viol_lin));

    ScenarioConfig c = config;
    c.scenarios = 100;
    ScenarioSet set = c.scenario_set(dist);
    PolicyEvaluator evaluator(set);
    const auto best = optimize_bangbang(evaluator, c.risk.beta, 0.8, c.search());
    const auto run = evaluator.run(best.policy, 0);
    const double horizon = run.t.back();
    const auto costate = costate_trajectory(diag, run.t, run.active, horizon,
                                            config.network_params().dt);
    const bool crossings_ok = costate.zero_crossings <= 1;
    r.lines.push_back(format("costate on the optimal trajectory (x0=%.3f km, t_b=%.2f min, T=%.2f "
                             "h): %zu zero crossings (max 1): %s",
                             best.policy.cutoff_km, units::hours_to_minutes(best.policy.switch_time_h),
                             horizon, costate.zero_crossings, verdict(crossings_ok)));
    r.data = {{"concavity_violation", viol},
              {"linear_concavity_violation", viol_lin},
              {"zero_crossings", costate.zero_crossings},
              {"policy", {{"x0_km", best.policy.cutoff_km},
                          {"t_b_h", best.policy.switch_time_h}}}};
    return concave && crossings_ok;
  });
}

const std::vector<std::string>& reproduce_targets() {
  static const std::vector<std::string> targets{
      "counterexample", "geometry", "capacities", "risk",  "conservation",
      "propositions",   "tables",   "mpc-figures", "flood", "all"};
  return targets;
}

std::vector<CheckResult> run_target(const std::string& target, const ScenarioConfig& config,
                                    const ReproduceOptions& options) {
  using Check = CheckResult (*)(const ScenarioConfig&, const ReproduceOptions&);
  std::vector<Check> checks;
  if (target == "counterexample") {
    checks = {check_counterexample};
  } else if (target == "geometry") {
    checks = {check_geometry_constants, check_distribution, check_hazard};
  } else if (target == "capacities") {
    checks = {check_capacities};
  } else if (target == "risk") {
    checks = {check_avar};
  } else if (target == "conservation") {
    checks = {check_conservation};
  } else if (target == "propositions") {
    checks = {check_propositions, check_costate};
  } else if (target == "tables") {
    checks = {check_tables};
  } else if (target == "mpc-figures") {
    checks = {check_mpc};
  } else if (target == "flood") {
    checks = {check_flood};
  } else if (target == "all") {
    checks = {check_counterexample, check_geometry_constants, check_distribution,
              check_hazard,         check_capacities,         check_avar,
              check_conservation,   check_propositions,       check_tables,
              check_mpc,            check_flood,              check_costate};
  } else {
    throw ConfigError({"unknown reproduce target '" + target + "'"});
  }
  std::vector<CheckResult> out;
  out.reserve(checks.size());
  for (Check check : checks) out.push_back(check(config, options));
  return out;
}

}  // namespace evac
