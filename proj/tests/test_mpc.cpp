#include <doctest.h>

#include <cmath>

#include "evac/mpc.hpp"
#include "evac/optimizer.hpp"
#include "small_scenario.hpp"

using namespace evac;
using evac::testing::small_config;
using evac::testing::small_distribution;

namespace {

ScenarioConfig mpc_small(double volatility) {
  auto c = small_config(1);
  c.demand.volatility = volatility;
  c.mpc.realizations = 2;
  c.mpc.inner_scenarios = 4;
  c.mpc.grid = 6;
  c.mpc.pattern_steps = 10;
  c.mpc.record_until_min = 6.0;
  return c;
}

}  // namespace

TEST_CASE("without noise the first plan is the open-loop optimum") {
  const auto c = mpc_small(0.0);
  const auto problem = c.mpc_problem(small_distribution());
  const auto config = c.mpc_config(0.8);
  const auto run = mpc_realization(problem, config, 0);
  REQUIRE_FALSE(run.failed);

  ScenarioSet set;
  set.master_seed = c.seed;
  set.count = config.inner_scenarios;
  set.gbm = problem.gbm;
  set.demand = problem.demand;
  set.network = problem.network;
  set.horizon_h = problem.horizon_h;
  PolicyEvaluator evaluator(set);
  const auto open = optimize_bangbang(evaluator, config.beta, config.alpha, config.search);
  REQUIRE_FALSE(run.t_star_min.empty());
  CHECK(run.t_star_min[0] == doctest::Approx(60.0 * open.policy.switch_time_h).epsilon(1e-9));
  CHECK(run.x_star_km[0] == doctest::Approx(open.policy.cutoff_km).epsilon(1e-9));
}

TEST_CASE("receding horizon records are consistent") {
  const auto c = mpc_small(0.03);
  const auto problem = c.mpc_problem(small_distribution());
  const auto config = c.mpc_config(0.8);
  const auto res = mpc_run(problem, config);
  REQUIRE(res.runs.size() == 2);
  CHECK(res.failed == 0);
  CHECK(res.time_min.size() == res.mean_t_star_min.size());
  CHECK(res.time_min.front() == 0.0);
  const double support = problem.demand.edges.back();
  for (const auto& run : res.runs) {
    for (std::size_t i = 0; i < run.t_star_min.size(); ++i) {
      CHECK(run.t_star_min[i] >= 0.0);
      CHECK(run.x_star_km[i] >= 0.0);
      CHECK(run.x_star_km[i] <= support + 1e-9);
      if (run.t_star_min[i] == 0.0 && run.waiting[i] == 0.0) {
        CHECK(run.x_star_km[i] == doctest::Approx(support));
      }
    }
    CHECK(run.delay > 0.0);
  }
  const auto again = mpc_realization(problem, config, 1);
  CHECK(again.t_star_min == res.runs[1].t_star_min);
  CHECK(again.delay == res.runs[1].delay);
}
