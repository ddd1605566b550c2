#include <doctest.h>

#include <cmath>

#include "evac/error.hpp"
#include "evac/optimizer.hpp"
#include "small_scenario.hpp"

using namespace evac;
using evac::testing::small_config;
using evac::testing::small_distribution;

TEST_CASE("tie-break prefers earlier switch then wider cutoff") {
  const GridSample a{{5.0, 0.1}, 1.0};
  const GridSample b{{5.0, 0.2}, 1.0};
  const GridSample c{{6.0, 0.1}, 1.0};
  const GridSample d{{5.0, 0.3}, 0.5};
  CHECK(better(a, b));
  CHECK(better(c, a));
  CHECK(better(d, a));
  CHECK_FALSE(better(a, a));
}

TEST_CASE("optimum beats or equals no control on the same scenarios") {
  const auto c = small_config(8);
  PolicyEvaluator evaluator(c.scenario_set(small_distribution()));
  const auto res = optimize_bangbang(evaluator, c.risk.beta, 0.8, c.search());
  CHECK(res.objective <= res.no_control_objective);
  CHECK(res.objective < 0.9 * res.no_control_objective);
  CHECK(res.policy.switch_time_h > 0.0);
  CHECK(res.policy.switch_time_h <= c.horizon_h);
  CHECK(res.evaluations <= c.search().max_evaluations);
  CHECK(res.grid.size() == 64);
  CHECK(res.objective ==
        doctest::Approx(res.mean + c.risk.beta * res.avar).epsilon(1e-12));
  CHECK(res.objective == evaluator.objective(res.policy, c.risk.beta, 0.8));
}

TEST_CASE("a tiny population is released at once") {
  auto c = small_config(2);
  c.population = 100.0;
  PolicyEvaluator evaluator(c.scenario_set(small_distribution()));
  const auto res = optimize_bangbang(evaluator, c.risk.beta, 0.8, c.search());
  const auto steps = evaluator.release_steps(res.policy);
  for (auto s : steps) CHECK(s == 0);
  CHECK(res.objective == res.no_control_objective);
}

TEST_CASE("budget too small for the grid") {
  auto c = small_config(1);
  PolicyEvaluator evaluator(c.scenario_set(small_distribution()));
  auto search = c.search();
  search.max_evaluations = 10;
  CHECK_THROWS_AS(optimize_bangbang(evaluator, c.risk.beta, 0.8, search), NumericalError);
}
