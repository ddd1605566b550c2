#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "evac/evaluator.hpp"
#include "evac/parallel.hpp"
#include "small_scenario.hpp"

using namespace evac;
using evac::testing::small_config;
using evac::testing::small_distribution;

namespace {

double source_delay(const ScenarioSet& set, const Policy& policy, std::size_t s) {
  GbmDemandSource source(set.demand, policy, set.gbm, set.network.dt,
                         make_rng(set.master_seed, set.stream_offset + s), set.horizon_h);
  return simulate(CohortState(std::span<const Cohort>{}), set.network, source,
                  set.horizon_h + set.clearance_cap_h)
      .delay;
}

}  // namespace

TEST_CASE("evaluator agrees with the generic simulator") {
  const auto set = small_config(4).scenario_set(small_distribution());
  PolicyEvaluator evaluator(set);
  for (const Policy& policy :
       {Policy{BangBangPolicy::no_control()}, Policy{BangBangPolicy{4.0, 0.05}}}) {
    const auto& d = evaluator.delays(policy);
    REQUIRE(d.size() == 4);
    for (std::size_t s = 0; s < d.size(); ++s) {
      CHECK(d[s] == doctest::Approx(source_delay(set, policy, s)).epsilon(1e-5));
    }
  }
}

TEST_CASE("without noise every scenario has the deterministic delay") {
  auto c = small_config(3);
  c.demand.volatility = 0.0;
  const auto set = c.scenario_set(small_distribution());
  const auto res = evaluate_policy(BangBangPolicy::no_control(), set, 1.0 / 3.0, 0.8);
  for (double v : res.samples.values) CHECK(v == doctest::Approx(res.mean).epsilon(1e-12));
  CHECK(res.avar == doctest::Approx(res.mean).epsilon(1e-12));
  CHECK(res.objective == doctest::Approx(res.mean * (1.0 + 1.0 / 3.0)));
  CHECK(res.mean == doctest::Approx(source_delay(set, BangBangPolicy::no_control(), 0)));
}

TEST_CASE("equal release patterns share one simulation") {
  const auto set = small_config(2).scenario_set(small_distribution());
  PolicyEvaluator evaluator(set);
  const double a = evaluator.objective(BangBangPolicy{4.0, 0.1}, 1.0 / 3.0, 0.8);
  const double b = evaluator.objective(BangBangPolicy{4.001, 0.0995}, 1.0 / 3.0, 0.8);
  CHECK(a == b);
  CHECK(evaluator.simulations() == 1);
  CHECK(evaluator.requests() == 2);
  const auto steps = evaluator.release_steps(BangBangPolicy{4.0, 0.1});
  CHECK(std::is_sorted(steps.begin(), steps.end()));
  CHECK(steps.front() == 0);
  CHECK(steps.back() == static_cast<std::int64_t>(std::ceil(0.1 / set.network.dt - 1e-9)));
}

TEST_CASE("results do not depend on the worker count") {
  const auto set = small_config(6).scenario_set(small_distribution());
  ::setenv("EVAC_THREADS", "1", 1);
  const auto one = evaluate_policy(BangBangPolicy{5.0, 0.05}, set, 1.0 / 3.0, 0.9);
  ::setenv("EVAC_THREADS", "3", 1);
  CHECK(thread_count() == 3);
  const auto three = evaluate_policy(BangBangPolicy{5.0, 0.05}, set, 1.0 / 3.0, 0.9);
  ::unsetenv("EVAC_THREADS");
  CHECK(one.samples.values == three.samples.values);
  CHECK(one.objective == three.objective);
}

TEST_CASE("scenario streams are indexed by the offset") {
  auto set = small_config(4).scenario_set(small_distribution());
  const auto all = evaluate_policy(BangBangPolicy::no_control(), set, 0.0, 0.5).samples.values;
  set.stream_offset = 2;
  set.count = 2;
  const auto tail = evaluate_policy(BangBangPolicy::no_control(), set, 0.0, 0.5).samples.values;
  CHECK(tail[0] == all[2]);
  CHECK(tail[1] == all[3]);
}

TEST_CASE("parallel_for visits every index once and rethrows") {
  std::vector<int> hits(100, 0);
  parallel_for(hits.size(), [&](std::size_t i) { hits[i] += 1; });
  CHECK(std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; }));
  CHECK_THROWS_AS(parallel_for(10,
                               [](std::size_t i) {
                                 if (i == 7) throw std::runtime_error("boom");
                               }),
                  std::runtime_error);
}
