#include "evac/policy.hpp"

#include <cmath>

#include "evac/error.hpp"

namespace evac {

void BangBangPolicy::validate(double horizon_h) const {
  if (!(cutoff_km >= 0.0)) throw DomainError("cutoff distance must be non-negative");
  if (!(switch_time_h >= 0.0) || switch_time_h > horizon_h) {
    throw DomainError("switch time outside [0, horizon]");
  }
}

bool ReleaseTimeMap::is_monotone() const {
  for (std::size_t i = 1; i < release_time_h.size(); ++i) {
    if (release_time_h[i] < release_time_h[i - 1]) return false;
  }
  return true;
}

void ReleaseTimeMap::validate(double horizon_h) const {
  for (double t : release_time_h) {
    if (!(t >= 0.0) || t > horizon_h) throw DomainError("release time outside [0, horizon]");
  }
  if (!is_monotone()) throw DomainError("release-time map must be non-decreasing in distance");
}

std::vector<double> bin_release_times(const Policy& policy, std::span<const double> edges) {
  if (edges.size() < 2) throw DomainError("need at least one bin");
  const std::size_t bins = edges.size() - 1;
  if (const auto* bb = std::get_if<BangBangPolicy>(&policy)) {
    std::vector<double> out(bins);
    for (std::size_t k = 0; k < bins; ++k) {
      const double upper = edges[k + 1];
      const bool early = upper <= bb->cutoff_km + 1e-12 * std::max(1.0, std::abs(upper));
      out[k] = early ? 0.0 : bb->switch_time_h;
    }
    return out;
  }
  const auto& map = std::get<ReleaseTimeMap>(policy);
  if (map.release_time_h.size() != bins) {
    throw DomainError("release-time map size differs from the bin count");
  }
  return map.release_time_h;
}

}  // namespace evac
