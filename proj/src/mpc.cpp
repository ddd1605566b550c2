#include "evac/mpc.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <optional>
#include <stdexcept>

#include "evac/error.hpp"
#include "evac/evaluator.hpp"
#include "evac/parallel.hpp"

namespace evac {

namespace {

std::uint64_t inner_offset(std::size_t realization, std::size_t update) {
  return (static_cast<std::uint64_t>(realization + 1) << 32) +
         (static_cast<std::uint64_t>(update) << 16);
}

}  // namespace

MpcRealization mpc_realization(const MpcProblem& problem, const MpcConfig& config,
                               std::size_t index) {
  const NetworkParams& net = problem.network;
  net.validate();
  problem.demand.validate();
  const double dt = net.dt;
  const double du = config.update_step_h;
  if (!(du > 0.0)) throw DomainError("update step must be positive");
  if (!std::isnan(config.prediction_horizon_h) && du > config.prediction_horizon_h) {
    throw DomainError("update step exceeds the prediction horizon");
  }
  const auto per_update = static_cast<std::int64_t>(std::llround(du / dt));
  if (per_update < 1 || std::abs(static_cast<double>(per_update) * dt - du) > 1e-9 * du) {
    throw DomainError("update step must be a multiple of the simulation step");
  }
  if (config.inner_scenarios == 0 || config.inner_scenarios >= (1u << 16)) {
    throw DomainError("inner scenario count must lie in [1, 65535]");
  }
  const double record_until =
      std::isnan(config.record_until_h) ? problem.horizon_h : config.record_until_h;
  const auto records = static_cast<std::size_t>(std::ceil(record_until / du - 1e-9)) + 1;
  const double support = problem.demand.edges.back();
  const std::size_t inner = problem.gbm.volatility == 0.0 ? 1 : config.inner_scenarios;

  MpcRealization out;
  DemandSurface surface = problem.demand;
  surface.clock = 0.0;
  CohortState state(problem.initial_active);
  Rng truth = make_rng(config.master_seed, index);
  double released_cutoff = 0.0;
  bool full = surface.total() == 0.0;
  std::int64_t full_release_step = -1;
  std::optional<BangBangPolicy> plan;
  std::int64_t n = 0;
  const std::int64_t cap = static_cast<std::int64_t>(
      std::ceil((problem.horizon_h + 12.0) / dt));

  auto release_all = [&] {
    for (std::size_t k = 0; k < surface.bins(); ++k) {
      if (surface.mass[k] > 0.0) {
        state.inject(Cohort{surface.mass[k], surface.midpoint(k), static_cast<int>(k)});
        surface.mass[k] = 0.0;
      }
    }
    full = true;
    out.full_release_h = static_cast<double>(n) * dt;
  };

  for (std::size_t k = 0;; ++k) {
    const double t = static_cast<double>(n) * dt;
    const bool recording = k < records;
    if (!full && full_release_step < 0) {
      const double remaining = std::max(0.0, problem.horizon_h - t);
      const double hp = std::isnan(config.prediction_horizon_h)
                            ? remaining
                            : std::min(config.prediction_horizon_h, remaining);
      ScenarioSet set;
      set.master_seed = config.master_seed;
      set.stream_offset = inner_offset(index, k);
      set.count = inner;
      set.gbm = problem.gbm;
      set.demand = surface;
      set.demand.clock = 0.0;
      set.initial_active = state.cohorts();
      set.network = net;
      set.horizon_h = hp;
      SearchConfig search = config.search;
      search.cutoff_lo = released_cutoff;
      search.cutoff_hi = support;
      search.warm_start.reset();
      if (config.warm_start && plan) {
        search.warm_start = BangBangPolicy{std::max(plan->cutoff_km, released_cutoff),
                                           std::clamp(plan->switch_time_h - du, 0.0, hp)};
      }
      try {
        PolicyEvaluator evaluator(std::move(set));
        plan = optimize_bangbang(evaluator, config.beta, config.alpha, search).policy;
      } catch (const std::exception& e) {
        out.failed = true;
        out.failure = e.what();
        return out;
      }
      if (recording) {
        out.t_star_min.push_back(plan->switch_time_h * 60.0);
        out.x_star_km.push_back(plan->cutoff_km);
      }
      ReleaseResult early = release(std::move(surface),
                                    BangBangPolicy{plan->cutoff_km, problem.horizon_h}, 0.0);
      surface = std::move(early.surface);
      state.inject(early.inflow);
      released_cutoff = std::max(released_cutoff, plan->cutoff_km);
      const auto switch_step =
          static_cast<std::int64_t>(std::ceil(plan->switch_time_h / dt - 1e-9));
      if (switch_step < per_update) full_release_step = n + switch_step;
      if (surface.total() == 0.0) {
        full = true;
        out.full_release_h = t;
      }
    } else if (recording) {
      out.t_star_min.push_back(0.0);
      out.x_star_km.push_back(support);
    }
    if (recording) {
      out.active.push_back(state.active());
      out.waiting.push_back(surface.total());
    }
    if (!recording && full && state.empty()) break;

    for (std::int64_t i = 0; i < per_update; ++i) {
      if (!full && full_release_step >= 0 && n >= full_release_step) release_all();
      const double waiting = surface.total();
      out.delay += advance(state, net, dt) + waiting * dt;
      if (waiting > 0.0) evolve_inplace(surface, problem.gbm, dt, truth);
      ++n;
      if (n > cap) {
        out.failed = true;
        out.failure = "network did not clear within the simulated time";
        return out;
      }
    }
  }
  return out;
}

MpcResult mpc_run(const MpcProblem& problem, const MpcConfig& config) {
  if (config.realizations == 0) throw DomainError("MPC needs at least one realization");
  MpcResult result;
  result.runs.resize(config.realizations);
  parallel_for(config.realizations, [&](std::size_t r) {
    result.runs[r] = mpc_realization(problem, config, r);
  });
  const double record_until =
      std::isnan(config.record_until_h) ? problem.horizon_h : config.record_until_h;
  const auto records =
      static_cast<std::size_t>(std::ceil(record_until / config.update_step_h - 1e-9)) + 1;
  result.time_min.resize(records);
  result.mean_t_star_min.assign(records, 0.0);
  result.mean_x_star_km.assign(records, 0.0);
  result.mean_active.assign(records, 0.0);
  result.mean_waiting.assign(records, 0.0);
  std::size_t ok = 0;
  for (const MpcRealization& run : result.runs) {
    if (run.failed) {
      ++result.failed;
      continue;
    }
    ++ok;
    result.mean_delay += run.delay;
    for (std::size_t k = 0; k < records; ++k) {
      result.mean_t_star_min[k] += run.t_star_min[k];
      result.mean_x_star_km[k] += run.x_star_km[k];
      result.mean_active[k] += run.active[k];
      result.mean_waiting[k] += run.waiting[k];
    }
  }
  for (std::size_t k = 0; k < records; ++k) {
    result.time_min[k] = static_cast<double>(k) * config.update_step_h * 60.0;
  }
  if (ok == 0) throw NumericalError("every MPC realization failed");
  const double inv = 1.0 / static_cast<double>(ok);
  result.mean_delay *= inv;
  for (std::size_t k = 0; k < records; ++k) {
    result.mean_t_star_min[k] *= inv;
    result.mean_x_star_km[k] *= inv;
    result.mean_active[k] *= inv;
    result.mean_waiting[k] *= inv;
  }
  return result;
}

void write_mpc_csv(std::ostream& out, const MpcResult& result) {
  out.precision(10);
  out << "k,t_min,t_star_min,x_star_km,active_veh,waiting_veh\n";
  for (std::size_t k = 0; k < result.time_min.size(); ++k) {
    out << k << ',' << result.time_min[k] << ',' << result.mean_t_star_min[k] << ','
        << result.mean_x_star_km[k] << ',' << result.mean_active[k] << ','
        << result.mean_waiting[k] << '\n';
  }
}

}  // namespace evac
