#include <doctest.h>

#include "evac/error.hpp"
#include "evac/nfd.hpp"

using namespace evac;

TEST_CASE("triangular speed at the ends of the density range") {
  const auto m = SpeedDensityModel::triangular(65.0, 1600.0, 120.0);
  CHECK(m.speed(0.0) == doctest::Approx(65.0));
  CHECK(m.speed(120.0) == doctest::Approx(0.0));
  CHECK(m.speed(200.0) == 0.0);
}

TEST_CASE("triangular critical density and capacity") {
  const auto m = SpeedDensityModel::triangular(65.0, 1600.0, 120.0);
  CHECK(m.critical_density() == doctest::Approx(1600.0 / 65.0).epsilon(1e-12));
  CHECK(m.critical_density() == doctest::Approx(24.6).epsilon(0.01));
  CHECK(m.flow(m.critical_density()) == doctest::Approx(1600.0).epsilon(1e-9));
  // The congested branch meets the free branch continuously.
  const double rc = m.critical_density();
  CHECK(m.speed(rc * (1 + 1e-9)) == doctest::Approx(65.0).epsilon(1e-6));
  CHECK(m.wave_speed() == doctest::Approx(1600.0 / (120.0 - rc)));
}

TEST_CASE("explicit wave speed must be consistent") {
  const auto base = SpeedDensityModel::triangular(65.0, 1600.0, 120.0);
  CHECK_NOTHROW(SpeedDensityModel::triangular(65.0, 1600.0, 120.0, base.wave_speed()));
  CHECK_THROWS_AS(SpeedDensityModel::triangular(65.0, 1600.0, 120.0, 30.0), DomainError);
}

TEST_CASE("linear model values") {
  const auto m = SpeedDensityModel::linear(1.0, 1.0);
  CHECK(m.speed(1.0 / 3.0) == doctest::Approx(2.0 / 3.0));
  CHECK(m.flow(0.5) == doctest::Approx(0.25));
  CHECK(m.critical_density() == doctest::Approx(0.5));
  CHECK(m.flow(0.0) == 0.0);
}

TEST_CASE("trapezoidal flat top and midpoint convention") {
  const auto m = SpeedDensityModel::trapezoidal(65.0, 20.0, 40.0, 120.0);
  CHECK(m.critical_density() == doctest::Approx(30.0));
  const auto [a, b] = m.capacity_interval();
  CHECK(a == doctest::Approx(20.0));
  CHECK(b == doctest::Approx(40.0));
  CHECK(m.flow(25.0) == doctest::Approx(m.capacity()));
  CHECK(m.flow(35.0) == doctest::Approx(m.capacity()));
  // Grid argmax lands on the plateau.
  double best = 0.0;
  double arg = 0.0;
  for (int i = 0; i <= 12000; ++i) {
    const double rho = i * 0.01;
    if (m.flow(rho) > best + 1e-9) {
      best = m.flow(rho);
      arg = rho;
    }
  }
  CHECK(arg >= 20.0 - 0.01);
  CHECK(arg <= 40.0);
  CHECK(m.speed(120.0) == 0.0);
}

TEST_CASE("speed is non-increasing and flow non-negative for every shape") {
  const SpeedDensityModel models[] = {SpeedDensityModel::triangular(65.0, 1600.0, 120.0),
                                      SpeedDensityModel::trapezoidal(65.0, 20.0, 40.0, 120.0),
                                      SpeedDensityModel::linear(65.0, 120.0)};
  for (const auto& m : models) {
    double prev = m.speed(0.0);
    for (int i = 1; i <= 1300; ++i) {
      const double rho = i * 0.1;
      const double v = m.speed(rho);
      CHECK(v <= prev + 1e-12);
      CHECK(m.flow(rho) >= 0.0);
      prev = v;
    }
  }
}

TEST_CASE("invalid parameters and densities throw") {
  CHECK_THROWS_AS(SpeedDensityModel::linear(-1.0, 1.0), DomainError);
  CHECK_THROWS_AS(SpeedDensityModel::triangular(65.0, 1600.0, 10.0), DomainError);
  CHECK_THROWS_AS(SpeedDensityModel::trapezoidal(65.0, 40.0, 20.0, 120.0), DomainError);
  CHECK_THROWS_AS(SpeedDensityModel::linear(1.0, 1.0).speed(-0.1), DomainError);
}
