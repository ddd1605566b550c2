#include <doctest.h>

#include <array>
#include <cmath>
#include <numbers>
#include <random>

#include "evac/demand.hpp"
#include "evac/error.hpp"
#include "evac/geometry.hpp"
#include "evac/scenario.hpp"

using namespace evac;

namespace {

constexpr double kPi = std::numbers::pi;
const std::array<double, 3> kAmagerDeg{92.9, 145.3, 194.3};

DiskZone amager() { return DiskZone::from_degrees(5.54, kAmagerDeg); }

/// Area of the disk of radius R intersected with a disk of radius d centred on its rim,
/// divided by the disk area.
double single_cap_cdf(double d, double radius) {
  if (d >= 2.0 * radius) return 1.0;
  const double lens = d * d * std::acos(d / (2.0 * radius)) +
                      radius * radius * std::acos(1.0 - d * d / (2.0 * radius * radius)) -
                      0.5 * d * std::sqrt((2.0 * radius - d) * (2.0 * radius + d));
  return lens / (kPi * radius * radius);
}

}  // namespace

TEST_CASE("exit projection lands on the circle") {
  const Point p = project_exit({0.0, 0.0}, {0.0, 2.0}, 5.54);
  CHECK(p.x == doctest::Approx(0.0));
  CHECK(p.y == doctest::Approx(5.54));
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-20.0, 20.0);
  for (int i = 0; i < 100; ++i) {
    const Point c{u(rng), u(rng)};
    const Point q = project_exit(c, {u(rng), u(rng)}, 5.54);
    CHECK(norm(q) == doctest::Approx(5.54).epsilon(1e-12));
  }
  const Point knippelsbro{-0.281, 5.533};
  CHECK(norm(knippelsbro) == doctest::Approx(5.540).epsilon(0.005 / 5.54));
  CHECK(std::atan2(knippelsbro.y, knippelsbro.x) * 180.0 / kPi == doctest::Approx(92.9).epsilon(0.1 / 92.9));
}

TEST_CASE("angular gaps") {
  const auto gaps = amager().gaps();
  REQUIRE(gaps.size() == 3);
  CHECK(gaps[0] == doctest::Approx(0.914).epsilon(0.002 / 0.914));
  CHECK(gaps[1] == doctest::Approx(0.855).epsilon(0.002 / 0.855));
  // Exact value of the wrap-around gap; it differs from the published 4.516 by 0.0026.
  CHECK(gaps[2] == doctest::Approx(2 * kPi - (194.3 - 92.9) * kPi / 180.0).epsilon(1e-12));
  CHECK(gaps[0] + gaps[1] + gaps[2] == doctest::Approx(2 * kPi));

  const std::array<double, 2> anti{0.0, kPi};
  const auto g2 = angular_gaps(anti);
  CHECK(g2[0] == doctest::Approx(kPi));
  CHECK(g2[1] == doctest::Approx(kPi));
  const std::array<double, 4> four{0.0, kPi / 2, kPi, 3 * kPi / 2};
  for (double g : angular_gaps(four)) CHECK(g == doctest::Approx(kPi / 2));
  const std::array<double, 2> dup{1.0, 1.0};
  CHECK_THROWS_AS(angular_gaps(dup), DomainError);
}

TEST_CASE("cap half-angle closed form and Monte Carlo") {
  const double R = 5.54;
  CHECK(cap_half_angle(R, 0.0, R) == doctest::Approx(0.0));
  CHECK(cap_half_angle(R, 2 * R, R) == doctest::Approx(kPi));
  CHECK(cap_half_angle(3.0, 4.0, R) == doctest::Approx(0.777394).epsilon(1e-5));
  CHECK(cap_half_angle(1.0, 2.0, R) == 0.0);  // d < R - r

  // Fraction of the circle of radius 3 within distance 4 of the rim point (R, 0).
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 2 * kPi);
  const int n = 400000;
  int hit = 0;
  for (int i = 0; i < n; ++i) {
    const double th = u(rng);
    if (distance({3.0 * std::cos(th), 3.0 * std::sin(th)}, {R, 0.0}) <= 4.0) ++hit;
  }
  CHECK(static_cast<double>(hit) / n == doctest::Approx(0.7783 / kPi).epsilon(0.01));
}

TEST_CASE("union angle against Monte Carlo and its limits") {
  const DiskZone zone = amager();
  CHECK(union_angle(1.0, 0.5, zone) == 0.0);
  CHECK(union_angle(5.0, 20.0, zone) == doctest::Approx(2 * kPi));

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 2 * kPi);
  for (const auto& [r, d] : std::array<std::pair<double, double>, 4>{
           {{5.0, 1.0}, {4.0, 2.5}, {2.0, 5.0}, {5.3, 0.6}}}) {
    const int n = 1000000;
    int hit = 0;
    for (int i = 0; i < n; ++i) {
      const double th = u(rng);
      if (zone.min_distance({r * std::cos(th), r * std::sin(th)}) <= d) ++hit;
    }
    const double mc = 2 * kPi * hit / n;
    CHECK(union_angle(r, d, zone) == doctest::Approx(mc).epsilon(0.005));
  }
}

TEST_CASE("uniform CDF boundary values and single-exit closed form") {
  const DiskZone zone = amager();
  CHECK(cdf_uniform(0.0, zone) == 0.0);
  CHECK(cdf_uniform(2 * 5.54, zone) == 1.0);
  CHECK(cdf_uniform(zone.max_min_distance(), zone) == 1.0);

  const DiskZone one(5.54, {0.3});
  for (double d : {0.05, 0.5, 2.0, 5.0, 8.0, 10.5}) {
    CHECK(cdf_uniform(d, one) == doctest::Approx(single_cap_cdf(d, 5.54)).epsilon(1e-7));
  }
}

TEST_CASE("uniform CDF small-d asymptote") {
  // Each rim cap covers half a disk of radius d, so F ~ n d^2 / (2 R^2).
  const DiskZone zone = amager();
  const double d = 0.1;
  const double expect = 3 * d * d / (2 * 5.54 * 5.54);
  CHECK(cdf_uniform(d, zone) == doctest::Approx(expect).epsilon(0.05));
  CHECK(cdf_uniform(0.01, zone) == doctest::Approx(3 * 1e-4 / (2 * 5.54 * 5.54)).epsilon(0.005));
}

TEST_CASE("support of the Amager disk") {
  const DiskZone zone = amager();
  const double largest_gap = zone.gaps()[2];
  const double chord = 2 * 5.54 * std::sin(largest_gap / 4);
  CHECK(zone.max_min_distance() == doctest::Approx(std::max(5.54, chord)));
  CHECK(zone.max_min_distance() == doctest::Approx(10.0131).epsilon(1e-4));
}

TEST_CASE("radial CDF reduces to the uniform CDF") {
  const DiskZone zone = amager();
  const double R = zone.radius();
  const RadialDensity g = [R](double) { return 2.0 / (R * R); };
  for (double d : {0.3, 1.0, 3.0, 6.0, 9.0}) {
    CHECK(cdf_radial(d, zone, g) == doctest::Approx(cdf_uniform(d, zone)).epsilon(1e-6));
  }
  const RadialDensity bad = [](double) { return 1.0; };
  CHECK_THROWS_AS(cdf_radial(1.0, zone, bad), DomainError);
}

TEST_CASE("radial CDF of a thin rim annulus matches the arc fraction") {
  const DiskZone zone(5.0, {0.0});
  const double R = 5.0;
  // Smooth density with its mass within a few metres of the rim.
  const double k = 2000.0;
  const RadialDensity g = [=](double r) { return (k + 2.0) / (R * R) * std::pow(r / R, k); };
  for (double d : {1.0, 3.0, 7.0}) {
    // Arc of the rim within straight-line distance d of the exit.
    const double expect = 2.0 * std::asin(d / (2 * R)) / kPi;
    CHECK(cdf_radial(d, zone, g) == doctest::Approx(expect).epsilon(2e-3));
  }
}

TEST_CASE("planar quadrature matches the uniform CDF") {
  const DiskZone zone = amager();
  const auto density = PolarDensity::uniform(5.54, 400, 720);
  CHECK(density.mass() == doctest::Approx(1.0).epsilon(1e-9));
  for (double d : {0.5, 2.0, 4.0, 7.0, 9.5}) {
    CHECK(std::abs(cdf_general(d, zone, density) - cdf_uniform(d, zone)) < 1e-3);
  }
}

TEST_CASE("planar quadrature with mass concentrated next to an exit") {
  const DiskZone zone = amager();
  const std::size_t rings = 100;
  const std::size_t sectors = 3600;
  std::vector<double> values(rings * sectors, 0.0);
  const PolarDensity grid(5.54, rings, sectors, values);
  // Put all mass in the outermost cell closest to the first exit.
  const std::size_t j = static_cast<std::size_t>(zone.angles()[0] / (2 * kPi) * sectors);
  const double area = grid.ring_radius(rings - 1) * grid.ring_width() * grid.sector_width();
  values[(rings - 1) * sectors + j] = 1.0 / area;
  const PolarDensity spike(5.54, rings, sectors, values);
  CHECK(cdf_general(0.1, zone, spike) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK_THROWS_AS(cdf_general(1.0, zone, grid), DomainError);
}

TEST_CASE("mixture is linear in the weight and ordered pointwise") {
  ScenarioConfig c;
  c.distribution_points = 301;
  c.flood.rings = 120;
  c.flood.sectors = 360;
  const RiskField field = c.risk_field();
  const auto d1 = c.distribution(1.0, nullptr);
  const auto d0 = c.distribution(0.0, &field);
  const auto d23 = c.distribution(2.0 / 3.0, &field);
  const auto d13 = c.distribution(1.0 / 3.0, &field);
  for (std::size_t i = 0; i < d1.size(); ++i) {
    CHECK(d23.cdf[i] == doctest::Approx(2.0 / 3.0 * d1.cdf[i] + d0.cdf[i] / 3.0).epsilon(1e-9));
    CHECK(d13.cdf[i] <= d23.cdf[i] + 1e-12);
    CHECK(d23.cdf[i] <= d1.cdf[i] + 1e-12);
  }
  CHECK(d1.cdf.front() == 0.0);
  CHECK(d1.cdf.back() == 1.0);
  d1.validate();
  d13.validate();
}

TEST_CASE("tabulated distribution derived quantities") {
  auto grid = uniform_grid(0.0, 40.0, 4001);
  const auto e = TripLengthDistribution::exponential(grid, 0.5);
  e.validate();
  CHECK(is_ifr(e).ifr);
  for (std::size_t i = 10; i < 1000; ++i) CHECK(e.hazard[i] == doctest::Approx(0.5).epsilon(1e-4));
  CHECK(e.cdf_at(-1.0) == 0.0);
  CHECK(e.cdf_at(100.0) == 1.0);
  CHECK(e.cdf_at(2.0) == doctest::Approx(1 - std::exp(-1.0)).epsilon(1e-6));

  const auto u = TripLengthDistribution::from_cdf({0.0, 1.0, 2.0, 3.0, 4.0}, {0.0, 0.25, 0.5, 0.75, 1.0});
  CHECK(u.density[2] == doctest::Approx(0.25));
  CHECK(u.hazard[2] == doctest::Approx(0.5));
  CHECK(std::isnan(u.hazard[4]));
  CHECK(u.support_max() == 4.0);
  CHECK_THROWS_AS(TripLengthDistribution::from_cdf({0.0, 1.0, 2.0}, {0.0, 0.7, 0.5}).validate(),
                  DomainError);
}

TEST_CASE("hazard of the Amager disk dips where exit caps merge") {
  // Recorded behaviour: the three-exit disk is not IFR, a single exit is.
  ScenarioConfig c;
  const auto three = c.distribution(1.0, nullptr);
  const auto report = is_ifr(three);
  CHECK_FALSE(report.ifr);
  CHECK(report.violation_distance > 2.0);
  CHECK(report.violation_distance < 3.0);
  c.zone.exit_angles_deg = {92.9};
  CHECK(is_ifr(c.distribution(1.0, nullptr)).ifr);
}

TEST_CASE("build_distribution rejects a coarse grid") {
  const DiskZone zone = amager();
  const auto grid = uniform_grid(0.0, zone.max_min_distance(), 5);
  CHECK_THROWS_AS(build_distribution(zone, 1.0, std::monostate{}, grid), NumericalError);
}
