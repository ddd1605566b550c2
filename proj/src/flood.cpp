#include "evac/flood.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "evac/error.hpp"
#include "evac/units.hpp"

namespace evac {

double SurgeParams::celerity() const { return std::sqrt(gravity * still_water_depth_m); }

void SurgeParams::validate() const {
  if (!(still_water_depth_m > 0.0)) throw DomainError("still-water depth must be positive");
  if (!(max_elevation_m > 0.0)) throw DomainError("max elevation must be positive");
  if (!(radius_m > 0.0)) throw DomainError("radius must be positive");
  if (!(gravity > 0.0)) throw DomainError("gravity must be positive");
}

double front_position(double t_s, const SurgeParams& p) {
  if (t_s < 0.0) throw DomainError("front_position: negative time");
  const double c = p.celerity();
  const double a = 2.0 * p.slope() * p.gravity / c;
  // sqrt(1 + a t) - 1 written without cancellation.
  const double bracket = a * t_s / (std::sqrt(1.0 + a * t_s) + 1.0);
  return p.radius_m - c * t_s * bracket;
}

double arrival_time(double x_m, const SurgeParams& p, ArrivalMode mode) {
  const double radius = p.radius_m;
  if (x_m > radius * (1.0 + 1e-12) || x_m < -radius * (1.0 + 1e-12)) {
    throw DomainError("arrival_time: abscissa outside [-R, R]");
  }
  const double u = std::max(0.0, radius - x_m);
  if (u == 0.0) return 0.0;
  const double c = p.celerity();
  if (mode == ArrivalMode::ClosedForm) {
    const double b = 2.0 * p.slope() * u / p.still_water_depth_m;
    return std::max(0.0, u / c * (b / (std::sqrt(1.0 + b) + 1.0)));
  }
  double lo = 0.0;
  double hi = 1.0;
  while (radius - front_position(hi, p) < u) hi *= 2.0;
  for (int it = 0; it < 200 && (hi - lo) > 1e-13 * hi; ++it) {
    double mid = 0.5 * (lo + hi);
    if (radius - front_position(mid, p) < u) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double segment_area_fraction(double x_front_m, double radius_m) {
  if (!(radius_m > 0.0)) throw DomainError("segment area: radius must be positive");
  const double u = std::clamp(x_front_m / radius_m, -1.0, 1.0);
  // Area of {x >= u} on the unit disk is acos(u) - u sqrt(1 - u^2).
  return (std::acos(u) - u * std::sqrt(1.0 - u * u)) / units::kPi;
}

double flooded_ratio(double t_s, const SurgeParams& p) {
  return segment_area_fraction(front_position(t_s, p), p.radius_m);
}

double crossing_time(const SurgeParams& p) { return arrival_time(-p.radius_m, p); }

RiskField::RiskField(PolarDensity density, double floor_s)
    : density_(std::move(density)), floor_s_(floor_s) {
  profile_r_.reserve(density_.rings());
  profile_g_.reserve(density_.rings());
  for (std::size_t i = 0; i < density_.rings(); ++i) {
    profile_r_.push_back(density_.ring_radius(i));
    profile_g_.push_back(density_.ring_angular_integral(i));
  }
}

double RiskField::weight_at(Point p_km) const {
  const double r = norm(p_km);
  if (r > density_.radius()) return 0.0;
  auto i = std::min(density_.rings() - 1, static_cast<std::size_t>(r / density_.ring_width()));
  double theta = std::atan2(p_km.y, p_km.x);
  if (theta < 0.0) theta += 2.0 * units::kPi;
  auto j = std::min(density_.sectors() - 1,
                    static_cast<std::size_t>(theta / density_.sector_width()));
  return density_.value(i, j);
}

RadialDensity RiskField::radial_profile() const {
  auto r = profile_r_;
  auto g = profile_g_;
  return [r = std::move(r), g = std::move(g)](double x) {
    if (x <= r.front()) return g.front();
    if (x >= r.back()) return g.back();
    auto it = std::upper_bound(r.begin(), r.end(), x);
    auto hi = static_cast<std::size_t>(it - r.begin());
    auto lo = hi - 1;
    double w = (x - r[lo]) / (r[hi] - r[lo]);
    return g[lo] + w * (g[hi] - g[lo]);
  };
}

RiskField build_risk_field(const ArrivalFunction& arrival, double zone_radius_km,
                           const RiskGridSpec& spec) {
  if (!(spec.floor_s > 0.0)) throw DomainError("risk field floor must be positive");
  if (!(zone_radius_km > 0.0)) throw DomainError("zone radius must be positive");
  if (spec.rings == 0 || spec.sectors == 0) throw DomainError("risk grid is empty");
  const double dr = zone_radius_km / static_cast<double>(spec.rings);
  const double dtheta = 2.0 * units::kPi / static_cast<double>(spec.sectors);
  std::vector<double> values(spec.rings * spec.sectors);
  double total = 0.0;
  for (std::size_t i = 0; i < spec.rings; ++i) {
    const double r = (static_cast<double>(i) + 0.5) * dr;
    for (std::size_t j = 0; j < spec.sectors; ++j) {
      const double theta = (static_cast<double>(j) + 0.5) * dtheta;
      const double t = arrival(r * std::cos(theta));
      const double w = 1.0 / std::max(t, spec.floor_s);
      values[i * spec.sectors + j] = w;
      total += w * r * dr * dtheta;
    }
  }
  for (double& v : values) v /= total;
  return RiskField(PolarDensity(zone_radius_km, spec.rings, spec.sectors, std::move(values)),
                   spec.floor_s);
}

RiskField build_risk_field(const SurgeParams& p, double zone_radius_km, const RiskGridSpec& spec) {
  p.validate();
  if (std::abs(units::km_to_m(zone_radius_km) - p.radius_m) > 1e-6 * p.radius_m) {
    throw DomainError("surge radius and zone radius disagree");
  }
  const ArrivalMode mode = spec.mode;
  return build_risk_field(
      [&p, mode](double x_km) {
        double x_m = std::clamp(units::km_to_m(x_km), -p.radius_m, p.radius_m);
        return arrival_time(x_m, p, mode);
      },
      zone_radius_km, spec);
}

void write_risk_field_csv(std::ostream& out, const RiskField& field) {
  out.precision(10);
  out << "x_km,y_km,weight_per_km2\n";
  const auto& d = field.density();
  for (std::size_t i = 0; i < d.rings(); ++i) {
    for (std::size_t j = 0; j < d.sectors(); ++j) {
      double r = d.ring_radius(i);
      double th = d.sector_angle(j);
      out << r * std::cos(th) << ',' << r * std::sin(th) << ',' << d.value(i, j) << '\n';
    }
  }
}

void write_radial_profile_csv(std::ostream& out, const RiskField& field) {
  out.precision(12);
  out << "r_km,g_per_km2\n";
  for (std::size_t i = 0; i < field.profile_radius().size(); ++i) {
    out << field.profile_radius()[i] << ',' << field.profile_value()[i] << '\n';
  }
}

}  // namespace evac
