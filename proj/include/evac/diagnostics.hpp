#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "evac/geometry.hpp"
#include "evac/nfd.hpp"

namespace evac {

/// Service rate S(Delta) of the lumped accumulation Delta (veh), with rho = Delta / L.
struct ControlDiagnostics {
  double headway_h = 2.0 / 3600.0;
  std::vector<double> queue;    // Delta grid, veh
  std::vector<double> service;  // S, veh/h per vehicle-share (km/h times probability)
  std::vector<double> slope;    // S'(Delta), finite differences

  /// Largest second difference of S divided by max |S| (positive means convex somewhere).
  double concavity_violation() const;
  double slope_at(double queue_value) const;
};

/// S(Delta) = int min{V(Delta / L), l / T_h} f(l) dl = V - (1/T_h) int_0^{T_h V} F(l) dl.
ControlDiagnostics service_rate(const TripLengthDistribution& dist,
                                const SpeedDensityModel& model, double lane_km,
                                double headway_h, std::span<const double> queue_grid);

struct CostateTrajectory {
  std::vector<double> t;
  std::vector<double> p;
  std::size_t zero_crossings = 0;
};

/// Backward RK4 for p' = -1 + p S'(Delta(t)), p(T) = 0, with Delta(t) linearly interpolated
/// from samples. Sign changes are counted strictly before T.
CostateTrajectory costate_trajectory(const ControlDiagnostics& diag,
                                     std::span<const double> times,
                                     std::span<const double> queue, double horizon, double step);

}  // namespace evac
