#include <doctest.h>

#include <cmath>
#include <random>

#include "evac/error.hpp"
#include "evac/flood.hpp"

using namespace evac;

TEST_CASE("front starts at the shoreline and moves west quadratically at first") {
  const SurgeParams p;
  CHECK(front_position(0.0, p) == p.radius_m);
  const double d1 = p.radius_m - front_position(1.0, p);
  const double d2 = p.radius_m - front_position(2.0, p);
  CHECK(d1 > 0.0);
  CHECK(d2 / d1 == doctest::Approx(4.0).epsilon(1e-3));
  const double a = 2.0 * p.slope() * p.gravity / p.celerity();
  CHECK(d1 == doctest::Approx(0.5 * p.celerity() * a).epsilon(1e-3));
  CHECK_THROWS_AS(front_position(-1.0, p), DomainError);
}

TEST_CASE("front is strictly decreasing") {
  const SurgeParams p;
  double prev = front_position(0.0, p);
  for (int i = 1; i <= 5000; ++i) {
    const double x = front_position(i * 0.5, p);
    CHECK(x < prev);
    prev = x;
  }
}

TEST_CASE("arrival time inverts the front position") {
  const SurgeParams p;
  CHECK(arrival_time(p.radius_m, p) == 0.0);
  double prev = -1.0;
  for (int i = 0; i <= 400; ++i) {
    const double x = p.radius_m - 2.0 * p.radius_m * i / 400.0;
    const double t = arrival_time(x, p);
    CHECK(std::abs(front_position(t, p) - x) <= 1e-4 * p.radius_m);
    CHECK(t > prev);
    prev = t;
  }
  CHECK_THROWS_AS(arrival_time(2.0 * p.radius_m, p), DomainError);
  // The closed form is a different curve; both are finite and vanish at the rim.
  CHECK(arrival_time(p.radius_m, p, ArrivalMode::ClosedForm) == 0.0);
  CHECK(std::isfinite(arrival_time(0.0, p, ArrivalMode::ClosedForm)));
}

TEST_CASE("segment area fraction") {
  CHECK(segment_area_fraction(5540.0, 5540.0) == doctest::Approx(0.0));
  CHECK(segment_area_fraction(0.0, 5540.0) == doctest::Approx(0.5));
  CHECK(segment_area_fraction(-5540.0, 5540.0) == doctest::Approx(1.0));
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  int inside = 0;
  int right = 0;
  while (inside < 100000) {
    const double x = u(rng);
    const double y = u(rng);
    if (x * x + y * y > 1.0) continue;
    ++inside;
    if (x >= 0.4) ++right;
  }
  CHECK(std::abs(segment_area_fraction(0.4, 1.0) - right / 1e5) < 0.003);
}

TEST_CASE("flooded ratio is non-decreasing and reaches the whole disk") {
  const SurgeParams p;
  CHECK(flooded_ratio(0.0, p) == doctest::Approx(0.0));
  double prev = 0.0;
  const double cross = crossing_time(p);
  for (int i = 1; i <= 200; ++i) {
    const double r = flooded_ratio(cross * i / 200.0, p);
    CHECK(r >= prev - 1e-15);
    prev = r;
  }
  CHECK(prev == doctest::Approx(1.0));
}

TEST_CASE("risk field normalisation, orientation and profile") {
  const SurgeParams p;
  RiskGridSpec spec;
  spec.rings = 120;
  spec.sectors = 360;
  const RiskField field = build_risk_field(p, 5.54, spec);
  CHECK(field.mass() == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(field.weight_at({5.5, 0.0}) > field.weight_at({-5.5, 0.0}));
  CHECK(field.weight_at({6.0, 0.0}) == 0.0);
  // int g(r) r dr over the ring centres.
  double m = 0.0;
  const auto r = field.profile_radius();
  const auto g = field.profile_value();
  const double dr = 5.54 / 120.0;
  for (std::size_t i = 0; i < r.size(); ++i) m += g[i] * r[i] * dr;
  CHECK(m == doctest::Approx(1.0).epsilon(1e-4));
  CHECK(field.radial_profile()(r.front() / 2) == doctest::Approx(g.front()));
}

TEST_CASE("risk field is invariant to scaling arrival times") {
  const SurgeParams p;
  RiskGridSpec spec;
  spec.rings = 40;
  spec.sectors = 90;
  spec.floor_s = 1e-9;
  const ArrivalFunction base = [&](double x_km) {
    return std::max(1.0, arrival_time(x_km * 1000.0, p));
  };
  const ArrivalFunction scaled = [&](double x_km) { return 7.5 * base(x_km); };
  const auto a = build_risk_field(base, 5.54, spec);
  const auto b = build_risk_field(scaled, 5.54, spec);
  for (std::size_t k = 0; k < a.density().values().size(); ++k) {
    CHECK(a.density().values()[k] == doctest::Approx(b.density().values()[k]).epsilon(1e-9));
  }
}

TEST_CASE("invalid flood inputs throw") {
  SurgeParams p;
  p.still_water_depth_m = 0.0;
  CHECK_THROWS_AS(p.validate(), DomainError);
  RiskGridSpec spec;
  spec.floor_s = 0.0;
  CHECK_THROWS_AS(build_risk_field(SurgeParams{}, 5.54, spec), DomainError);
}
