#pragma once

#include <iosfwd>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace evac {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

double norm(Point p);
double distance(Point a, Point b);

/**
 * Circular idealisation of an evacuation zone with exits on its rim.
 *
 * Exit angles are kept sorted ascending in [0, 2pi); exits are exactly on the circle.
 */
class DiskZone {
public:
  DiskZone(double radius_km, std::vector<double> exit_angles_rad);
  static DiskZone from_degrees(double radius_km, std::span<const double> exit_angles_deg);

  double radius() const noexcept { return radius_; }
  std::span<const double> angles() const noexcept { return angles_; }
  std::size_t exit_count() const noexcept { return angles_.size(); }
  std::vector<Point> exits() const;

  /// Consecutive circular gaps between exits, including the wrap-around gap.
  std::vector<double> gaps() const;

  /// Distance from p to the nearest exit.
  double min_distance(Point p) const;

  /// Largest nearest-exit distance over the closed disk (support of the trip length).
  double max_min_distance() const;

private:
  double radius_;
  std::vector<double> angles_;
};

/// Radial projection of a boundary point onto the circle of radius R about the centroid.
Point project_exit(Point centroid, Point boundary_point, double radius);

/// Circular gaps between sorted angles; they sum to 2pi. Duplicates are a DomainError.
std::vector<double> angular_gaps(std::span<const double> angles);

/// Half-angle, seen from the disk centre, of the arc of the circle |p| = r that lies within
/// distance d of a rim point of a disk of radius R.
double cap_half_angle(double r, double d, double radius);

/// Angular measure of {theta : nearest exit within d} on the circle of radius r.
double union_angle(double r, double d, const DiskZone& zone);

/// Nearest-exit distance CDF for origins uniform on the disk (1-D polar quadrature).
double cdf_uniform(double d, const DiskZone& zone);

/// Radial density g with  int_0^R g(r) r dr = 1; the planar density is g(r) / (2 pi).
using RadialDensity = std::function<double(double)>;

/// Nearest-exit distance CDF under a radially symmetric origin density.
/// Throws DomainError when g is not normalised to 1e-4.
double cdf_radial(double d, const DiskZone& zone, const RadialDensity& g);

/**
 * A planar density on the disk tabulated on a cell-centred polar grid.
 * value(i, j) is the density (1/km^2) on ring i and sector j.
 */
class PolarDensity {
public:
  PolarDensity(double radius, std::size_t rings, std::size_t sectors, std::vector<double> values);
  static PolarDensity uniform(double radius, std::size_t rings, std::size_t sectors);

  double radius() const noexcept { return radius_; }
  std::size_t rings() const noexcept { return rings_; }
  std::size_t sectors() const noexcept { return sectors_; }
  double ring_width() const noexcept { return radius_ / static_cast<double>(rings_); }
  double sector_width() const noexcept;
  double ring_radius(std::size_t i) const noexcept;
  double sector_angle(std::size_t j) const noexcept;
  double value(std::size_t i, std::size_t j) const noexcept { return values_[i * sectors_ + j]; }
  std::span<const double> values() const noexcept { return values_; }

  /// Midpoint-rule integral of the density over the disk.
  double mass() const;

  /// Integral of the density over ring i restricted to the angular interval [a, b]
  /// (b - a <= 2 pi, any winding), per unit ring width: int_a^b rho(r_i, theta) r_i dtheta.
  double ring_arc_mass(std::size_t i, double a, double b) const;

  /// Angular integral of the density on ring i: int_0^{2pi} rho(r_i, theta) dtheta.
  double ring_angular_integral(std::size_t i) const;

private:
  double prefix(std::size_t i, double angle) const;

  double radius_;
  std::size_t rings_;
  std::size_t sectors_;
  std::vector<double> values_;
  std::vector<double> prefix_;  // per ring, cumulative sector integrals, sectors_+1 entries
};

/// Nearest-exit distance CDF under a tabulated planar density. Throws DomainError when the
/// density does not integrate to 1 within 1e-3.
double cdf_general(double d, const DiskZone& zone, const PolarDensity& density);
std::vector<double> cdf_general(std::span<const double> d_grid, const DiskZone& zone,
                                const PolarDensity& density);

/**
 * Tabulated trip-length distribution: CDF F, density f and hazard h = f / (1 - F) on a
 * strictly increasing distance grid (km).
 *
 * The hazard is truncated (NaN) where 1 - F < kHazardTailCutoff.
 */
struct TripLengthDistribution {
  static constexpr double kHazardTailCutoff = 1e-6;

  std::vector<double> distance;
  std::vector<double> cdf;
  std::vector<double> density;
  std::vector<double> hazard;
  double mixture_weight = 1.0;

  /// Build f by central differences (one-sided at the ends) and h by ratio.
  static TripLengthDistribution from_cdf(std::vector<double> grid, std::vector<double> cdf,
                                         double mixture_weight = 1.0);

  /// Tabulate an exponential distribution with the given rate on the grid.
  static TripLengthDistribution exponential(std::vector<double> grid, double rate);

  std::size_t size() const noexcept { return distance.size(); }

  /// Linear interpolation of F, 0 below the grid and 1 above it.
  double cdf_at(double x) const;

  /// Smallest grid distance with F = 1 to within 1e-12, or the last grid point.
  double support_max() const;

  /// Throws DomainError on any broken invariant (monotone F, F(0)=0, F(end)=1, f >= 0,
  /// trapezoid mass 1 within 1e-4, hazard consistency).
  void validate() const;
};

std::vector<double> uniform_grid(double lo, double hi, std::size_t points);

/// Risk component of the origin mixture: none, radial profile, or full planar field.
using RiskDensity = std::variant<std::monostate, RadialDensity, PolarDensity>;

/**
 * Tabulate F_D = lambda F_U + (1 - lambda) F_R on the grid, then f and h.
 *
 * The grid must be strictly increasing, start at 0 and reach zone.max_min_distance().
 * Throws NumericalError when F jumps by more than 0.05 between neighbouring nodes.
 */
TripLengthDistribution build_distribution(const DiskZone& zone, double mixture_weight,
                                          const RiskDensity& risk, std::span<const double> grid);

struct IfrReport {
  bool ifr = true;
  std::optional<std::size_t> first_violation;  // grid index
  double violation_distance = 0.0;
  double worst_relative_dip = 0.0;  // largest (h_max_so_far - h) / h_max_so_far seen
};

/// Non-decreasing hazard check allowing relative dips below the running maximum up to tol.
IfrReport is_ifr(const TripLengthDistribution& dist, double tol = 1e-3);

void write_distribution_csv(std::ostream& out, const TripLengthDistribution& dist);

}  // namespace evac
