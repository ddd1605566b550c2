#include "evac/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <limits>
#include <numeric>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "evac/error.hpp"
#include "evac/units.hpp"

namespace evac {

namespace {

constexpr double kTwoPi = 2.0 * units::kPi;

double wrap_angle(double a) {
  double w = std::fmod(a, kTwoPi);
  if (w < 0.0) w += kTwoPi;
  if (w >= kTwoPi) w = 0.0;
  return w;
}

/// Pieces of the union of arcs [phi_i - alpha, phi_i + alpha] as intervals inside
/// [s0, s0 + 2pi). Returns an empty vector and sets full=true when the union is the circle.
std::vector<std::pair<double, double>> arc_union(double alpha, std::span<const double> centres,
                                                 bool& full) {
  full = false;
  std::vector<std::pair<double, double>> out;
  if (alpha <= 0.0 || centres.empty()) return out;
  if (alpha >= units::kPi) {
    full = true;
    return out;
  }
  std::vector<double> starts;
  starts.reserve(centres.size());
  for (double c : centres) starts.push_back(wrap_angle(c - alpha));
  std::sort(starts.begin(), starts.end());
  const double s0 = starts.front();
  const double top = s0 + kTwoPi;
  std::vector<std::pair<double, double>> pieces;
  pieces.reserve(2 * starts.size());
  for (double s : starts) {
    double e = s + 2.0 * alpha;
    if (e > top) {
      pieces.emplace_back(s, top);
      pieces.emplace_back(s0, e - kTwoPi);
    } else {
      pieces.emplace_back(s, e);
    }
  }
  std::sort(pieces.begin(), pieces.end());
  for (const auto& p : pieces) {
    if (!out.empty() && p.first <= out.back().second) {
      out.back().second = std::max(out.back().second, p.second);
    } else {
      out.push_back(p);
    }
  }
  double total = 0.0;
  for (const auto& p : out) total += p.second - p.first;
  if (total >= kTwoPi * (1.0 - 1e-15)) {
    full = true;
    out.clear();
  }
  return out;
}

double union_measure(double alpha, std::span<const double> centres) {
  bool full = false;
  auto pieces = arc_union(alpha, centres, full);
  if (full) return kTwoPi;
  double total = 0.0;
  for (const auto& p : pieces) total += p.second - p.first;
  return std::clamp(total, 0.0, kTwoPi);
}

/// Radii in (lo, hi) where the union changes regime for a given d: caps start to overlap
/// across a gap, or a single cap covers the whole circle.
std::vector<double> breakpoints(double d, const DiskZone& zone, double lo, double hi) {
  const double radius = zone.radius();
  std::vector<double> pts{lo, hi};
  auto add = [&](double r) {
    if (r > lo && r < hi) pts.push_back(r);
  };
  add(d - radius);
  for (double gap : zone.gaps()) {
    double half = 0.5 * gap;
    if (half >= units::kPi) continue;
    double c = std::cos(half);
    double s = std::sin(half);
    double disc = d * d - radius * radius * s * s;
    if (disc < 0.0) continue;
    double root = std::sqrt(disc);
    add(radius * c + root);
    add(radius * c - root);
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

template <typename F>
double integrate_pieces(F&& f, const std::vector<double>& pts) {
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    if (pts[i + 1] - pts[i] <= 0.0) continue;
    double err = 0.0;
    total += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, pts[i], pts[i + 1],
                                                                           10, 1e-10, &err);
  }
  return total;
}

double radial_mass(const RadialDensity& g, double radius) {
  auto f = [&](double r) { return g(r) * r; };
  std::vector<double> pts = uniform_grid(0.0, radius, 33);
  return integrate_pieces(f, pts);
}

double cdf_radial_unchecked(double d, const DiskZone& zone, const RadialDensity& g) {
  if (d <= 0.0) return 0.0;
  const double radius = zone.radius();
  if (d >= zone.max_min_distance()) return 1.0;
  const double lo = std::max(0.0, radius - d);
  auto integrand = [&](double r) {
    return g(r) * r / kTwoPi * union_angle(r, d, zone);
  };
  auto pts = breakpoints(d, zone, lo, radius);
  // Tabulated profiles have kinks; extra uniform splits keep the adaptive rule honest.
  std::vector<double> fine;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    auto sub = uniform_grid(pts[i], pts[i + 1], 9);
    fine.insert(fine.end(), sub.begin(), sub.end() - 1);
  }
  fine.push_back(pts.back());
  return std::clamp(integrate_pieces(integrand, fine), 0.0, 1.0);
}

}  // namespace

double norm(Point p) { return std::hypot(p.x, p.y); }

double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

DiskZone::DiskZone(double radius_km, std::vector<double> exit_angles_rad)
    : radius_(radius_km), angles_(std::move(exit_angles_rad)) {
  if (!(radius_ > 0.0) || !std::isfinite(radius_)) {
    throw DomainError("disk radius must be positive and finite");
  }
  if (angles_.empty()) throw DomainError("disk zone needs at least one exit");
  for (double& a : angles_) {
    if (!std::isfinite(a)) throw DomainError("exit angle must be finite");
    a = wrap_angle(a);
  }
  std::sort(angles_.begin(), angles_.end());
  for (std::size_t i = 1; i < angles_.size(); ++i) {
    if (angles_[i] - angles_[i - 1] < 1e-12) throw DomainError("duplicate exit angles");
  }
  if (angles_.size() > 1 && angles_.front() + kTwoPi - angles_.back() < 1e-12) {
    throw DomainError("duplicate exit angles");
  }
}

DiskZone DiskZone::from_degrees(double radius_km, std::span<const double> exit_angles_deg) {
  std::vector<double> rad;
  rad.reserve(exit_angles_deg.size());
  for (double a : exit_angles_deg) rad.push_back(units::deg_to_rad(a));
  return DiskZone(radius_km, std::move(rad));
}

std::vector<Point> DiskZone::exits() const {
  std::vector<Point> out;
  out.reserve(angles_.size());
  for (double a : angles_) out.push_back({radius_ * std::cos(a), radius_ * std::sin(a)});
  return out;
}

std::vector<double> DiskZone::gaps() const {
  if (angles_.size() == 1) return {kTwoPi};
  return angular_gaps(angles_);
}

double DiskZone::min_distance(Point p) const {
  double best = std::numeric_limits<double>::infinity();
  for (const Point& c : exits()) best = std::min(best, distance(p, c));
  return best;
}

double DiskZone::max_min_distance() const {
  if (angles_.size() == 1) return 2.0 * radius_;
  double best = radius_;
  for (double gap : gaps()) best = std::max(best, 2.0 * radius_ * std::sin(0.25 * gap));
  return best;
}

Point project_exit(Point centroid, Point boundary_point, double radius) {
  double dx = boundary_point.x - centroid.x;
  double dy = boundary_point.y - centroid.y;
  if (dx == 0.0 && dy == 0.0) throw DomainError("boundary point coincides with centroid");
  double theta = std::atan2(dy, dx);
  return {radius * std::cos(theta), radius * std::sin(theta)};
}

std::vector<double> angular_gaps(std::span<const double> angles) {
  if (angles.size() < 2) throw DomainError("angular gaps need at least two angles");
  std::vector<double> sorted;
  sorted.reserve(angles.size());
  for (double a : angles) sorted.push_back(wrap_angle(a));
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> gaps;
  gaps.reserve(sorted.size());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    double next = (i + 1 < sorted.size()) ? sorted[i + 1] : sorted.front() + kTwoPi;
    double gap = next - sorted[i];
    if (gap < 1e-12) throw DomainError("duplicate angles");
    gaps.push_back(gap);
  }
  return gaps;
}

double cap_half_angle(double r, double d, double radius) {
  if (r < 0.0 || d < 0.0 || !(radius > 0.0)) throw DomainError("cap_half_angle: negative input");
  if (r == 0.0) return d < radius ? 0.0 : units::kPi;
  if (d < std::abs(radius - r)) return 0.0;
  if (d > radius + r) return units::kPi;
  double c = (r * r + radius * radius - d * d) / (2.0 * r * radius);
  return std::acos(std::clamp(c, -1.0, 1.0));
}

double union_angle(double r, double d, const DiskZone& zone) {
  return union_measure(cap_half_angle(r, d, zone.radius()), zone.angles());
}

double cdf_uniform(double d, const DiskZone& zone) {
  const double radius = zone.radius();
  const double g = 2.0 / (radius * radius);
  return cdf_radial_unchecked(d, zone, [g](double) { return g; });
}

double cdf_radial(double d, const DiskZone& zone, const RadialDensity& g) {
  double mass = radial_mass(g, zone.radius());
  if (std::abs(mass - 1.0) > 1e-4) {
    std::ostringstream msg;
    msg << "radial density not normalised: int g(r) r dr = " << mass;
    throw DomainError(msg.str());
  }
  return cdf_radial_unchecked(d, zone, g);
}

PolarDensity::PolarDensity(double radius, std::size_t rings, std::size_t sectors,
                           std::vector<double> values)
    : radius_(radius), rings_(rings), sectors_(sectors), values_(std::move(values)) {
  if (!(radius_ > 0.0)) throw DomainError("polar density radius must be positive");
  if (rings_ == 0 || sectors_ == 0) throw DomainError("polar density grid is empty");
  if (values_.size() != rings_ * sectors_) throw DomainError("polar density size mismatch");
  for (double v : values_) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw DomainError("polar density must be finite, >= 0");
  }
  const double dtheta = sector_width();
  prefix_.assign(rings_ * (sectors_ + 1), 0.0);
  for (std::size_t i = 0; i < rings_; ++i) {
    double* p = &prefix_[i * (sectors_ + 1)];
    for (std::size_t j = 0; j < sectors_; ++j) p[j + 1] = p[j] + value(i, j) * dtheta;
  }
}

PolarDensity PolarDensity::uniform(double radius, std::size_t rings, std::size_t sectors) {
  double v = 1.0 / (units::kPi * radius * radius);
  return PolarDensity(radius, rings, sectors, std::vector<double>(rings * sectors, v));
}

double PolarDensity::sector_width() const noexcept {
  return kTwoPi / static_cast<double>(sectors_);
}

double PolarDensity::ring_radius(std::size_t i) const noexcept {
  return (static_cast<double>(i) + 0.5) * ring_width();
}

double PolarDensity::sector_angle(std::size_t j) const noexcept {
  return (static_cast<double>(j) + 0.5) * sector_width();
}

double PolarDensity::mass() const {
  double total = 0.0;
  for (std::size_t i = 0; i < rings_; ++i) {
    total += ring_angular_integral(i) * ring_radius(i) * ring_width();
  }
  return total;
}

double PolarDensity::prefix(std::size_t i, double angle) const {
  const double* p = &prefix_[i * (sectors_ + 1)];
  double pos = angle / sector_width();
  if (pos <= 0.0) return 0.0;
  if (pos >= static_cast<double>(sectors_)) return p[sectors_];
  auto j = static_cast<std::size_t>(pos);
  double frac = pos - static_cast<double>(j);
  return p[j] + frac * (p[j + 1] - p[j]);
}

double PolarDensity::ring_angular_integral(std::size_t i) const {
  return prefix_[i * (sectors_ + 1) + sectors_];
}

double PolarDensity::ring_arc_mass(std::size_t i, double a, double b) const {
  double len = b - a;
  if (len <= 0.0) return 0.0;
  double r = ring_radius(i);
  if (len >= kTwoPi) return r * ring_angular_integral(i);
  double start = wrap_angle(a);
  double end = start + len;
  double m;
  if (end <= kTwoPi) {
    m = prefix(i, end) - prefix(i, start);
  } else {
    m = (ring_angular_integral(i) - prefix(i, start)) + prefix(i, end - kTwoPi);
  }
  return r * m;
}

std::vector<double> cdf_general(std::span<const double> d_grid, const DiskZone& zone,
                                const PolarDensity& density) {
  if (std::abs(density.radius() - zone.radius()) > 1e-9 * zone.radius()) {
    throw DomainError("density grid radius differs from zone radius");
  }
  const double mass = density.mass();
  if (std::abs(mass - 1.0) > 1e-3) {
    std::ostringstream msg;
    msg << "planar density not normalised: mass = " << mass;
    throw DomainError(msg.str());
  }
  const double d_max = zone.max_min_distance();
  const double dr = density.ring_width();
  std::vector<double> out;
  out.reserve(d_grid.size());
  for (double d : d_grid) {
    if (d <= 0.0) {
      out.push_back(0.0);
      continue;
    }
    if (d >= d_max) {
      out.push_back(1.0);
      continue;
    }
    double total = 0.0;
    for (std::size_t i = 0; i < density.rings(); ++i) {
      double alpha = cap_half_angle(density.ring_radius(i), d, zone.radius());
      bool full = false;
      auto pieces = arc_union(alpha, zone.angles(), full);
      if (full) {
        total += density.ring_radius(i) * density.ring_angular_integral(i) * dr;
        continue;
      }
      for (const auto& p : pieces) total += density.ring_arc_mass(i, p.first, p.second) * dr;
    }
    out.push_back(std::clamp(total / mass, 0.0, 1.0));
  }
  return out;
}

double cdf_general(double d, const DiskZone& zone, const PolarDensity& density) {
  const double grid[1] = {d};
  return cdf_general(std::span<const double>(grid, 1), zone, density).front();
}

TripLengthDistribution TripLengthDistribution::from_cdf(std::vector<double> grid,
                                                        std::vector<double> cdf,
                                                        double mixture_weight) {
  if (grid.size() < 3 || grid.size() != cdf.size()) {
    throw DomainError("distribution needs matching grid and CDF with at least 3 points");
  }
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) throw DomainError("distance grid must be strictly increasing");
  }
  TripLengthDistribution out;
  out.mixture_weight = mixture_weight;
  const std::size_t n = grid.size();
  out.density.resize(n);
  out.hazard.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t lo = (i == 0) ? 0 : i - 1;
    std::size_t hi = (i + 1 == n) ? i : i + 1;
    out.density[i] = std::max(0.0, (cdf[hi] - cdf[lo]) / (grid[hi] - grid[lo]));
  }
  for (std::size_t i = 0; i < n; ++i) {
    double survival = 1.0 - cdf[i];
    out.hazard[i] = survival >= kHazardTailCutoff ? out.density[i] / survival
                                                  : std::numeric_limits<double>::quiet_NaN();
  }
  out.distance = std::move(grid);
  out.cdf = std::move(cdf);
  return out;
}

TripLengthDistribution TripLengthDistribution::exponential(std::vector<double> grid, double rate) {
  if (!(rate > 0.0)) throw DomainError("exponential rate must be positive");
  std::vector<double> cdf;
  cdf.reserve(grid.size());
  for (double x : grid) cdf.push_back(-std::expm1(-rate * x));
  cdf.back() = 1.0;
  return from_cdf(std::move(grid), std::move(cdf));
}

double TripLengthDistribution::cdf_at(double x) const {
  if (x <= distance.front()) return x < distance.front() ? 0.0 : cdf.front();
  if (x >= distance.back()) return 1.0;
  auto it = std::upper_bound(distance.begin(), distance.end(), x);
  std::size_t hi = static_cast<std::size_t>(it - distance.begin());
  std::size_t lo = hi - 1;
  double w = (x - distance[lo]) / (distance[hi] - distance[lo]);
  return cdf[lo] + w * (cdf[hi] - cdf[lo]);
}

double TripLengthDistribution::support_max() const {
  for (std::size_t i = 0; i < cdf.size(); ++i) {
    if (cdf[i] >= 1.0 - 1e-12) return distance[i];
  }
  return distance.back();
}

void TripLengthDistribution::validate() const {
  const std::size_t n = distance.size();
  if (n < 3 || cdf.size() != n || density.size() != n || hazard.size() != n) {
    throw DomainError("distribution tables have inconsistent sizes");
  }
  if (mixture_weight < 0.0 || mixture_weight > 1.0) {
    throw DomainError("mixture weight outside [0, 1]");
  }
  for (std::size_t i = 1; i < n; ++i) {
    if (!(distance[i] > distance[i - 1])) throw DomainError("distance grid not increasing");
    if (cdf[i] < cdf[i - 1]) throw DomainError("CDF decreases");
  }
  if (std::abs(cdf.front()) > 1e-6 && distance.front() <= 0.0) {
    throw DomainError("F(0) != 0");
  }
  if (std::abs(cdf.back() - 1.0) > 1e-6) throw DomainError("F(d_max) != 1");
  double mass = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (density[i] < 0.0) throw DomainError("negative density");
    if (i > 0) mass += 0.5 * (density[i] + density[i - 1]) * (distance[i] - distance[i - 1]);
  }
  if (std::abs(mass - 1.0) > 1e-4) {
    std::ostringstream msg;
    msg << "density integrates to " << mass;
    throw DomainError(msg.str());
  }
  for (std::size_t i = 0; i < n; ++i) {
    double survival = 1.0 - cdf[i];
    if (survival >= kHazardTailCutoff) {
      double expect = density[i] / survival;
      if (std::abs(hazard[i] - expect) > 1e-12 * std::max(1.0, expect)) {
        throw DomainError("hazard inconsistent with f / (1 - F)");
      }
    }
  }
}

std::vector<double> uniform_grid(double lo, double hi, std::size_t points) {
  if (points < 2) throw DomainError("uniform grid needs at least two points");
  std::vector<double> out(points);
  const double step = (hi - lo) / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) out[i] = lo + step * static_cast<double>(i);
  out.back() = hi;
  return out;
}

TripLengthDistribution build_distribution(const DiskZone& zone, double mixture_weight,
                                          const RiskDensity& risk, std::span<const double> grid) {
  if (mixture_weight < 0.0 || mixture_weight > 1.0) {
    throw DomainError("mixture weight outside [0, 1]");
  }
  if (grid.size() < 3 || grid.front() != 0.0) throw DomainError("grid must start at 0");
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) throw DomainError("grid must be strictly increasing");
  }
  const double d_max = zone.max_min_distance();
  if (grid.back() < d_max * (1.0 - 1e-9)) {
    std::ostringstream msg;
    msg << "grid ends at " << grid.back() << " km, support extends to " << d_max << " km";
    throw DomainError(msg.str());
  }
  const bool needs_risk = mixture_weight < 1.0;
  if (needs_risk && std::holds_alternative<std::monostate>(risk)) {
    throw DomainError("mixture weight < 1 requires a risk density");
  }

  std::vector<double> uniform(grid.size(), 0.0);
  if (mixture_weight > 0.0) {
    for (std::size_t i = 0; i < grid.size(); ++i) uniform[i] = cdf_uniform(grid[i], zone);
  }
  std::vector<double> risky(grid.size(), 0.0);
  if (needs_risk) {
    if (const auto* g = std::get_if<RadialDensity>(&risk)) {
      double mass = radial_mass(*g, zone.radius());
      if (std::abs(mass - 1.0) > 1e-4) {
        std::ostringstream msg;
        msg << "radial density not normalised: int g(r) r dr = " << mass;
        throw DomainError(msg.str());
      }
      for (std::size_t i = 0; i < grid.size(); ++i) {
        risky[i] = cdf_radial_unchecked(grid[i], zone, *g);
      }
    } else {
      risky = cdf_general(grid, zone, std::get<PolarDensity>(risk));
    }
  }

  std::vector<double> cdf(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    cdf[i] = mixture_weight * uniform[i] + (1.0 - mixture_weight) * risky[i];
  }
  for (std::size_t i = 1; i < cdf.size(); ++i) {
    cdf[i] = std::max(cdf[i], cdf[i - 1]);
    if (cdf[i] - cdf[i - 1] > 0.05) {
      std::ostringstream msg;
      msg << "distance grid too coarse: F jumps by " << cdf[i] - cdf[i - 1] << " between "
          << grid[i - 1] << " and " << grid[i] << " km; refine the grid";
      throw NumericalError(msg.str());
    }
  }
  cdf.front() = 0.0;
  cdf.back() = 1.0;
  return TripLengthDistribution::from_cdf(std::vector<double>(grid.begin(), grid.end()),
                                          std::move(cdf), mixture_weight);
}

IfrReport is_ifr(const TripLengthDistribution& dist, double tol) {
  IfrReport report;
  double running = 0.0;
  for (std::size_t i = 0; i < dist.hazard.size(); ++i) {
    double h = dist.hazard[i];
    if (!std::isfinite(h)) continue;
    if (h >= running) {
      running = h;
      continue;
    }
    double dip = (running - h) / running;
    report.worst_relative_dip = std::max(report.worst_relative_dip, dip);
    if (dip > tol && report.ifr) {
      report.ifr = false;
      report.first_violation = i;
      report.violation_distance = dist.distance[i];
    }
  }
  return report;
}

void write_distribution_csv(std::ostream& out, const TripLengthDistribution& dist) {
  out.precision(12);
  out << "d_km,F,f_per_km,h_per_km\n";
  for (std::size_t i = 0; i < dist.size(); ++i) {
    out << dist.distance[i] << ',' << dist.cdf[i] << ',' << dist.density[i] << ',';
    if (std::isfinite(dist.hazard[i])) out << dist.hazard[i];
    out << '\n';
  }
}

}  // namespace evac
