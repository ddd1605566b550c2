#pragma once

#include <cstddef>
#include <vector>

#include "evac/bathtub.hpp"
#include "evac/demand.hpp"

namespace evac {

/// Small deterministic gating problem: n_x demand bins, n_t release slots of equal length.
struct SmallInstance {
  DemandSurface demand;
  NetworkParams network;
  std::size_t time_slots = 4;
  double slot_h = 0.1;
};

struct BruteForceResult {
  /// control[t][x] = 1 when bin x is released by slot t (once released, stays released).
  std::vector<std::vector<int>> control;
  /// First release slot per bin; time_slots means "held until the end of the window".
  std::vector<std::size_t> release_slot;
  double delay = 0.0;
  std::size_t grids_enumerated = 0;
  std::size_t distinct_maps = 0;
};

/**
 * Exhaustive search over all binary release grids u(t_k, x_j). A grid is reduced to its first
 * release slot per bin; bins never released are released when the window closes. Ties are
 * resolved toward earlier total release, then lexicographically. Throws DomainError when
 * n_t * n_x > 20.
 */
BruteForceResult brute_force_optimal(const SmallInstance& instance);

/// At every slot the released bins form a prefix of the distance-ordered bins.
bool is_threshold_in_x(const std::vector<std::vector<int>>& control);

/// Release slots non-decreasing in distance.
bool is_monotone_release(const std::vector<std::size_t>& release_slot);

/// Every bin is released either at slot 0 or at one common later slot.
bool is_single_switch(const std::vector<std::size_t>& release_slot);

}  // namespace evac
