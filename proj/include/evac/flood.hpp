#pragma once

#include <iosfwd>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "evac/geometry.hpp"

namespace evac {

/**
 * Dam-break surge over a uniformly sloped dry bed rising from the eastern shoreline
 * (x = R) to z_max at x = -R. All quantities are SI (m, s).
 */
struct SurgeParams {
  double still_water_depth_m = 3.0;
  double max_elevation_m = 10.0;
  double radius_m = 5540.0;
  double gravity = 9.81;

  double slope() const { return max_elevation_m / (2.0 * radius_m); }
  double celerity() const;  // sqrt(g H0)
  void validate() const;
};

/// Surge front position x_f(t) in m; x_f(0) = R, strictly decreasing.
double front_position(double t_s, const SurgeParams& p);

enum class ArrivalMode { ClosedForm, Inverted };

/// First-arrival time (s) at abscissa x (m). Inverted mode solves x_f(t) = x by bisection;
/// closed-form mode evaluates the published algebraic expression, which is not the exact
/// inverse of x_f.
double arrival_time(double x_m, const SurgeParams& p, ArrivalMode mode = ArrivalMode::Inverted);

/// Fraction of the disk area with x >= x_front (circular segment), in [0, 1].
double segment_area_fraction(double x_front_m, double radius_m);

/// Flooded fraction of the disk at time t.
double flooded_ratio(double t_s, const SurgeParams& p);

/// Time at which the front reaches the western rim x = -R.
double crossing_time(const SurgeParams& p);

struct RiskGridSpec {
  std::size_t rings = 300;
  std::size_t sectors = 720;
  double floor_s = 60.0;  // regularisation floor on arrival times
  ArrivalMode mode = ArrivalMode::Inverted;
};

/// Normalised static risk weights on a polar grid of the disk (km), plus the angular
/// integral g(r) used as a radial profile.
class RiskField {
public:
  RiskField(PolarDensity density, double floor_s);

  const PolarDensity& density() const noexcept { return density_; }
  double floor_s() const noexcept { return floor_s_; }

  /// Risk weight (1/km^2) of the cell containing p; 0 outside the disk.
  double weight_at(Point p_km) const;

  /// Disk quadrature of the weights.
  double mass() const { return density_.mass(); }

  std::span<const double> profile_radius() const noexcept { return profile_r_; }
  std::span<const double> profile_value() const noexcept { return profile_g_; }

  /// Piecewise-linear g(r) through the ring centres, constant beyond the first and last.
  RadialDensity radial_profile() const;

private:
  PolarDensity density_;
  double floor_s_;
  std::vector<double> profile_r_;
  std::vector<double> profile_g_;
};

/// Arrival time in seconds as a function of the abscissa in km.
using ArrivalFunction = std::function<double(double)>;

RiskField build_risk_field(const SurgeParams& p, double zone_radius_km, const RiskGridSpec& spec);
RiskField build_risk_field(const ArrivalFunction& arrival, double zone_radius_km,
                           const RiskGridSpec& spec);

void write_risk_field_csv(std::ostream& out, const RiskField& field);
void write_radial_profile_csv(std::ostream& out, const RiskField& field);

}  // namespace evac
