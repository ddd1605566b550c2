#include <doctest.h>

#include <cmath>

#include "evac/dumbbell.hpp"
#include "evac/error.hpp"
#include "evac/geometry.hpp"

using namespace evac;

TEST_CASE("dumbbell shape membership") {
  const DumbbellZone z;
  CHECK(z.contains({-3.0, 0.0}));
  CHECK(z.contains({3.0, 0.9}));
  CHECK(z.contains({0.0, 0.05}));
  CHECK_FALSE(z.contains({0.0, 0.5}));
  CHECK_FALSE(z.contains({5.0, 0.0}));
  CHECK_NOTHROW(z.validate());
  DumbbellZone bad = z;
  bad.exit = {0.0, 3.0};
  CHECK_THROWS_AS(bad.validate(), DomainError);
  bad = z;
  bad.resolution = 0.1;
  CHECK_THROWS_AS(bad.validate(), DomainError);
}

TEST_CASE("geodesic raster distances") {
  const DumbbellZone z;
  const auto raster = geodesic_raster(z);
  CHECK(raster.at(z.exit) < z.resolution);
  // Straight corridor path from the exit to the right centre.
  CHECK(raster.at({3.0, 0.0}) == doctest::Approx(6.0).epsilon(0.02));
  // Inside the convex left disk the geodesic is the Euclidean distance (8-connected bias).
  CHECK(raster.at({-3.0, 0.8}) == doctest::Approx(0.8).epsilon(0.09));
  CHECK(std::isinf(raster.at({0.0, 0.5})));
}

TEST_CASE("dumbbell trip-length distribution is a valid non-IFR distribution") {
  const auto dist = dumbbell_distribution(DumbbellZone{});
  dist.validate();
  const auto report = is_ifr(dist);
  CHECK_FALSE(report.ifr);
  CHECK(report.violation_distance > 1.0);
  CHECK(report.violation_distance < 5.0);
  // The level-set length collapses as the path enters the corridor.
  auto density_at = [&](double x) {
    for (std::size_t i = 0; i < dist.size(); ++i) {
      if (dist.distance[i] >= x) return dist.density[i];
    }
    return 0.0;
  };
  CHECK(density_at(0.9) / density_at(1.5) > 5.0);
}
