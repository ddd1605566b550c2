#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "evac/bathtub.hpp"
#include "evac/error.hpp"
#include "evac/reproduce.hpp"

using namespace evac;

namespace {

NetworkParams unit_network(double dt = 0.1) {
  NetworkParams p;
  p.lane_km = 1.0;
  p.model = SpeedDensityModel::linear(1.0, 1.0);
  p.exit_capacity = std::numeric_limits<double>::infinity();
  p.dt = dt;
  return p;
}

}  // namespace

TEST_CASE("empty state does not move or accumulate delay") {
  CohortState s;
  const double area = advance(s, unit_network(), 1.0);
  CHECK(area == 0.0);
  CHECK(s.active() == 0.0);
  CHECK(s.completed() == 0.0);
}

TEST_CASE("a lone cohort exits after length over speed") {
  for (const auto& [length, expect] : {std::pair{1.0, 1.5}, std::pair{10.0, 15.0}}) {
    const Cohort c{1.0 / 3.0, length, 0};
    auto trace = simulate(CohortState(std::span<const Cohort>(&c, 1)), unit_network(0.7),
                          std::vector<ScheduledRelease>{}, nullptr, 100.0);
    REQUIRE(trace.completions.size() == 1);
    CHECK(trace.completions[0].time == doctest::Approx(expect).epsilon(1e-12));
    CHECK(trace.delay == doctest::Approx(expect / 3.0).epsilon(1e-12));
  }
}

TEST_CASE("event splitting updates the speed when a cohort leaves") {
  // Two cohorts of 1/4 at 1 km and 3 km: speed 1/2 until the first exits at t=2, then 3/4.
  const std::vector<Cohort> cs{{0.25, 1.0, 0}, {0.25, 3.0, 1}};
  CohortState s(cs);
  std::vector<Completion> log;
  advance(s, unit_network(), 5.0, &log);
  REQUIRE(log.size() == 2);
  CHECK(log[0].time == doctest::Approx(2.0));
  CHECK(log[1].time == doctest::Approx(2.0 + 2.0 / 0.75));
}

TEST_CASE("results do not depend on the step size for a fixed schedule") {
  const std::vector<ScheduledRelease> schedule{{0.0, {{0.2, 2.0, 0}, {0.1, 5.0, 1}}},
                                               {1.0, {{0.3, 4.0, 2}}}};
  auto waiting = [](double t) { return t < 1.0 ? 0.3 : 0.0; };
  const auto a = simulate(CohortState(), unit_network(0.5), schedule, waiting, 100.0);
  const auto b = simulate(CohortState(), unit_network(0.05), schedule, waiting, 100.0);
  CHECK(a.delay == doctest::Approx(b.delay).epsilon(1e-12));
  CHECK(a.clearance_time == doctest::Approx(b.clearance_time).epsilon(1e-12));
}

TEST_CASE("conservation on random schedules") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> count(0.001, 0.02);
  std::uniform_real_distribution<double> len(0.1, 12.0);
  for (int rep = 0; rep < 20; ++rep) {
    std::vector<ScheduledRelease> schedule;
    for (int k = 0; k < 6; ++k) {
      ScheduledRelease r{0.4 * k, {}};
      for (int j = 0; j < 4; ++j) r.cohorts.push_back({count(rng), len(rng), j});
      schedule.push_back(r);
    }
    const auto trace = simulate(CohortState(), unit_network(0.13), schedule, nullptr, 200.0);
    for (const auto& p : trace.points) {
      CHECK(p.injected == doctest::Approx(p.active + p.completed).epsilon(1e-12));
    }
    CHECK(trace.points.back().active == doctest::Approx(0.0));
  }
}

TEST_CASE("zero demand gives a flat trace and no delay") {
  const auto trace = simulate(CohortState(), unit_network(), std::vector<ScheduledRelease>{},
                              nullptr, 1.0);
  CHECK(trace.delay == 0.0);
  for (const auto& p : trace.points) CHECK(p.active == 0.0);
}

TEST_CASE("invalid cohorts and schedules throw") {
  CohortState s;
  CHECK_THROWS_AS(s.inject(Cohort{-1.0, 1.0, 0}), DomainError);
  CHECK_THROWS_AS(s.inject(Cohort{1.0, 0.0, 0}), DomainError);
  const std::vector<ScheduledRelease> backwards{{1.0, {}}, {0.5, {}}};
  CHECK_THROWS_AS(simulate(CohortState(), unit_network(), backwards, nullptr, 2.0), DomainError);
}

TEST_CASE("exit-rate diagnostic") {
  const Cohort c{1.0, 1.0, 0};
  auto params = unit_network(0.1);
  params.exit_capacity = 100.0;
  const auto trace =
      simulate(CohortState(std::span<const Cohort>(&c, 1)), params, std::vector<ScheduledRelease>{},
               nullptr, 10.0);
  // At rho = 1 the network is jammed and nothing leaves.
  CHECK(trace.completions.empty());
  // At half density the whole mass exits in one instant.
  params.lane_km = 2.0;
  const auto moving = simulate(CohortState(std::span<const Cohort>(&c, 1)), params,
                               std::vector<ScheduledRelease>{}, nullptr, 10.0);
  auto spike = exit_rate_check(moving, 5.0, 0.1);
  CHECK(spike.exceeded);
  CHECK(spike.max_rate == doctest::Approx(10.0));
  auto calm = exit_rate_check(moving, 50.0, 0.1);
  CHECK_FALSE(calm.exceeded);
}

TEST_CASE("three-cohort sequential release") {
  const auto run = counterexample_run(0.0);
  CHECK(run.travel_h[0] == doctest::Approx(1.5).epsilon(1e-9));
  CHECK(run.travel_h[1] == doctest::Approx(15.0).epsilon(1e-9));
  CHECK(run.travel_h[2] == doctest::Approx(28.5).epsilon(1e-9));
  CHECK(run.delay == doctest::Approx(21.0).epsilon(1e-12));
}

TEST_CASE("moving a sliver of the middle cohort forward lowers the delay") {
  // Analytic expansion of the event-driven model: D(eps) = 21 - 3/4 eps + O(eps^2).
  for (double eps : {1e-3, 1e-4}) {
    CHECK(counterexample_derivative(eps) == doctest::Approx(-0.75).epsilon(0.02));
  }
  CHECK_THROWS_AS(counterexample_run(0.5), DomainError);
}
