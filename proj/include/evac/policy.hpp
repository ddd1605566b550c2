#pragma once

#include <limits>
#include <span>
#include <variant>
#include <vector>

namespace evac {

/// Release every trip of length up to the cutoff at t = 0 and everything else at the switch.
struct BangBangPolicy {
  double cutoff_km = std::numeric_limits<double>::infinity();
  double switch_time_h = 0.0;

  static BangBangPolicy no_control() { return {}; }
  void validate(double horizon_h) const;
};

/// Release time per demand bin, on the bin grid of the demand surface.
struct ReleaseTimeMap {
  std::vector<double> release_time_h;

  bool is_monotone() const;
  /// Throws DomainError unless non-decreasing with values in [0, horizon].
  void validate(double horizon_h) const;
};

using Policy = std::variant<BangBangPolicy, ReleaseTimeMap>;

/// Per-bin release time implied by the policy on the given bin edges. A bang-bang policy
/// releases bin k at 0 when its upper edge is within the cutoff, else at the switch time.
std::vector<double> bin_release_times(const Policy& policy, std::span<const double> edges);

}  // namespace evac
