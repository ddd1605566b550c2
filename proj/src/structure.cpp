#include "evac/structure.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include "evac/error.hpp"
#include "evac/evaluator.hpp"

namespace evac {

BruteForceResult brute_force_optimal(const SmallInstance& instance) {
  const std::size_t nx = instance.demand.bins();
  const std::size_t nt = instance.time_slots;
  if (nx == 0 || nt == 0) throw DomainError("instance needs at least one bin and one slot");
  if (nx * nt > 20) throw DomainError("instance too large for exhaustive enumeration");
  const double dt = instance.network.dt;
  const double per_slot = instance.slot_h / dt;
  if (std::abs(per_slot - std::round(per_slot)) > 1e-9 || per_slot < 1.0) {
    throw DomainError("slot length must be a positive multiple of the simulation step");
  }
  const auto slot_steps = static_cast<std::int64_t>(std::llround(per_slot));

  ScenarioSet set;
  set.count = 1;
  set.gbm = GbmParams{0.0, 0.0};
  set.demand = instance.demand;
  set.network = instance.network;
  set.horizon_h = instance.slot_h * static_cast<double>(nt);
  PolicyEvaluator evaluator(set);

  BruteForceResult result;
  std::map<std::vector<std::size_t>, double> seen;
  const std::size_t cells = nx * nt;
  const std::size_t total = std::size_t{1} << cells;
  double best = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> best_map;
  std::vector<std::size_t> tau(nx);
  std::vector<std::int64_t> steps(nx);
  for (std::size_t grid = 0; grid < total; ++grid) {
    for (std::size_t j = 0; j < nx; ++j) {
      tau[j] = nt;
      for (std::size_t k = 0; k < nt; ++k) {
        if (grid >> (k * nx + j) & 1u) {
          tau[j] = k;
          break;
        }
      }
    }
    ++result.grids_enumerated;
    auto it = seen.find(tau);
    double delay;
    if (it != seen.end()) {
      delay = it->second;
    } else {
      for (std::size_t j = 0; j < nx; ++j) {
        steps[j] = static_cast<std::int64_t>(tau[j]) * slot_steps;
      }
      delay = evaluator.delays_for_steps(steps).front();
      seen.emplace(tau, delay);
    }
    const bool tie = best_map.empty() ? false : delay == best;
    bool take = delay < best;
    if (tie) {
      const auto sum = std::accumulate(tau.begin(), tau.end(), std::size_t{0});
      const auto best_sum = std::accumulate(best_map.begin(), best_map.end(), std::size_t{0});
      take = sum < best_sum || (sum == best_sum && tau < best_map);
    }
    if (take) {
      best = delay;
      best_map = tau;
    }
  }
  result.distinct_maps = seen.size();
  result.delay = best;
  result.release_slot = best_map;
  result.control.assign(nt, std::vector<int>(nx, 0));
  for (std::size_t k = 0; k < nt; ++k) {
    for (std::size_t j = 0; j < nx; ++j) result.control[k][j] = best_map[j] <= k ? 1 : 0;
  }
  return result;
}

bool is_threshold_in_x(const std::vector<std::vector<int>>& control) {
  for (const auto& row : control) {
    for (std::size_t j = 1; j < row.size(); ++j) {
      if (row[j] > row[j - 1]) return false;
    }
  }
  return true;
}

bool is_monotone_release(const std::vector<std::size_t>& release_slot) {
  for (std::size_t j = 1; j < release_slot.size(); ++j) {
    if (release_slot[j] < release_slot[j - 1]) return false;
  }
  return true;
}

bool is_single_switch(const std::vector<std::size_t>& release_slot) {
  std::size_t later = 0;
  for (std::size_t s : release_slot) {
    if (s == 0) continue;
    if (later != 0 && s != later) return false;
    later = s;
  }
  return true;
}

}  // namespace evac
