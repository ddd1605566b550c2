#include <doctest.h>

#include <cmath>

#include "evac/diagnostics.hpp"
#include "evac/geometry.hpp"
#include "evac/nfd.hpp"

using namespace evac;

namespace {

TripLengthDistribution uniform_trips() {
  std::vector<double> grid, cdf;
  for (int i = 0; i <= 100; ++i) {
    grid.push_back(i / 10.0);
    cdf.push_back(i / 100.0);
  }
  return TripLengthDistribution::from_cdf(grid, cdf);
}

std::vector<double> queue_grid(double jam) {
  std::vector<double> q;
  for (int i = 0; i <= 200; ++i) q.push_back(jam * i / 200.0);
  return q;
}

}  // namespace

TEST_CASE("service rate vanishes at jam and is concave for the linear model") {
  const auto model = SpeedDensityModel::linear(60.0, 100.0);
  const auto q = queue_grid(100.0);
  const auto d = service_rate(uniform_trips(), model, 1.0, 2.0 / 3600.0, q);
  CHECK(d.service.front() > 0.0);
  CHECK(d.service.back() == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(d.concavity_violation() <= 1e-9);
  for (double s : d.slope) CHECK(s <= 1e-12);
}

TEST_CASE("service rate is bounded by the speed") {
  const auto model = SpeedDensityModel::triangular(65.0, 1600.0, 120.0);
  const auto q = queue_grid(120.0);
  const auto d = service_rate(uniform_trips(), model, 1.0, 2.0 / 3600.0, q);
  for (std::size_t i = 0; i < q.size(); ++i) {
    CHECK(d.service[i] <= model.speed(q[i]) + 1e-9);
    CHECK(d.service[i] >= 0.0);
  }
}

TEST_CASE("costate with flat service is the remaining time") {
  ControlDiagnostics flat;
  flat.queue = {0.0, 10.0};
  flat.service = {1.0, 1.0};
  flat.slope = {0.0, 0.0};
  const std::vector<double> times{0.0, 2.0};
  const std::vector<double> queue{5.0, 5.0};
  const auto c = costate_trajectory(flat, times, queue, 2.0, 0.01);
  REQUIRE(c.t.size() == c.p.size());
  for (std::size_t i = 0; i < c.t.size(); ++i) CHECK(c.p[i] == doctest::Approx(2.0 - c.t[i]));
  CHECK(c.zero_crossings == 0);
}
