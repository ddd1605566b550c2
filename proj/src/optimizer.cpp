#include "evac/optimizer.hpp"

#include <algorithm>
#include <cmath>

#include "evac/error.hpp"

namespace evac {

bool better(const GridSample& a, const GridSample& b) {
  if (a.objective != b.objective) return a.objective < b.objective;
  if (a.policy.switch_time_h != b.policy.switch_time_h) {
    return a.policy.switch_time_h < b.policy.switch_time_h;
  }
  return a.policy.cutoff_km > b.policy.cutoff_km;
}

OptimizationResult optimize_bangbang(PolicyEvaluator& evaluator, double beta, double alpha,
                                     const SearchConfig& config) {
  const ScenarioSet& set = evaluator.scenarios();
  const double x_lo = config.cutoff_lo;
  const double x_hi = std::isnan(config.cutoff_hi) ? set.demand.edges.back() : config.cutoff_hi;
  const double t_hi = std::isnan(config.switch_hi) ? set.horizon_h : config.switch_hi;
  if (!(x_hi >= x_lo) || !(t_hi >= 0.0)) throw DomainError("empty search box");
  if (config.grid_cutoff < 2 || config.grid_switch < 2) {
    throw DomainError("coarse grid needs at least two points per axis");
  }
  const std::size_t grid_size = config.grid_cutoff * config.grid_switch;
  if (config.max_evaluations < grid_size + (config.warm_start ? 1 : 0)) {
    throw NumericalError("evaluation budget exhausted before the coarse grid completes");
  }

  OptimizationResult result;
  auto eval = [&](BangBangPolicy p) {
    p.cutoff_km = std::clamp(p.cutoff_km, x_lo, x_hi);
    p.switch_time_h = std::clamp(p.switch_time_h, 0.0, t_hi);
    ++result.evaluations;
    return GridSample{p, evaluator.objective(p, beta, alpha)};
  };

  GridSample best{};
  bool have = false;
  auto offer = [&](const GridSample& s) {
    if (!have || better(s, best)) {
      best = s;
      have = true;
    }
  };
  if (config.warm_start) offer(eval(*config.warm_start));
  const double hx = (x_hi - x_lo) / static_cast<double>(config.grid_cutoff - 1);
  const double ht = t_hi / static_cast<double>(config.grid_switch - 1);
  for (std::size_t i = 0; i < config.grid_cutoff; ++i) {
    for (std::size_t j = 0; j < config.grid_switch; ++j) {
      BangBangPolicy p{x_lo + hx * static_cast<double>(i), ht * static_cast<double>(j)};
      if (i + 1 == config.grid_cutoff) p.cutoff_km = x_hi;
      if (j + 1 == config.grid_switch) p.switch_time_h = t_hi;
      GridSample s = eval(p);
      result.grid.push_back(s);
      offer(s);
    }
  }

  double step_x = 0.5 * hx;
  double step_t = 0.5 * ht;
  for (std::size_t it = 0; it < config.pattern_steps; ++it) {
    if (step_x < config.min_step_km && step_t < config.min_step_h) break;
    const BangBangPolicy c = best.policy;
    const BangBangPolicy moves[4] = {{c.cutoff_km + step_x, c.switch_time_h},
                                     {c.cutoff_km - step_x, c.switch_time_h},
                                     {c.cutoff_km, c.switch_time_h + step_t},
                                     {c.cutoff_km, c.switch_time_h - step_t}};
    bool improved = false;
    for (const BangBangPolicy& m : moves) {
      if (result.evaluations >= config.max_evaluations) break;
      GridSample s = eval(m);
      if (better(s, best)) {
        best = s;
        improved = true;
      }
    }
    if (result.evaluations >= config.max_evaluations) break;
    if (!improved) {
      step_x *= 0.5;
      step_t *= 0.5;
    }
  }

  EvaluationResult detail = evaluator.evaluate(best.policy, beta, alpha);
  result.policy = best.policy;
  result.objective = detail.objective;
  result.mean = detail.mean;
  result.avar = detail.avar;
  result.no_control_objective = evaluator.objective(BangBangPolicy{x_hi, 0.0}, beta, alpha);
  result.simulations = evaluator.simulations();
  return result;
}

}  // namespace evac
