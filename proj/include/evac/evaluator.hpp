#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <vector>

#include "evac/bathtub.hpp"
#include "evac/demand.hpp"
#include "evac/policy.hpp"
#include "evac/risk.hpp"

namespace evac {

/// Monte Carlo scenario set for policy evaluation. Scenario s draws its demand noise from
/// make_rng(master_seed, stream_offset + s).
struct ScenarioSet {
  std::uint64_t master_seed = 1;
  std::uint64_t stream_offset = 0;
  std::size_t count = 1;
  GbmParams gbm;
  DemandSurface demand;               // waiting demand at the start
  std::vector<Cohort> initial_active;  // trips already on the network at the start
  NetworkParams network;
  double horizon_h = 1.5;        // all releases happen within [0, horizon]
  double clearance_cap_h = 12.0;  // simulated time allowed after the horizon

  void validate() const;
  /// Number of release steps: releases happen on step boundaries 0..control_steps().
  std::int64_t control_steps() const;
};

/**
 * Cumulative GBM factors G_k(n) per scenario, bin and step, shared by every policy evaluated
 * on the same scenario set (common random numbers). Stored in single precision.
 */
class NoiseBank {
public:
  NoiseBank(const ScenarioSet& set);

  std::size_t scenarios() const noexcept { return scenarios_; }
  std::size_t bins() const noexcept { return bins_; }
  std::int64_t steps() const noexcept { return steps_; }
  bool deterministic() const noexcept { return deterministic_; }
  double factor(std::size_t s, std::int64_t n, std::size_t k) const;
  /// True when the bank was built for the same seeds, noise and grid as set.
  bool compatible(const ScenarioSet& set) const;

private:
  std::uint64_t seed_;
  std::uint64_t offset_;
  GbmParams gbm_;
  std::vector<double> edges_;
  double dt_;
  std::size_t scenarios_;
  std::size_t bins_;
  std::int64_t steps_;
  bool deterministic_;
  std::vector<double> det_;  // per step, used when sigma = 0
  std::vector<float> data_;  // [s][n][k]
};

struct EvaluationResult {
  double objective = 0.0;
  double mean = 0.0;
  double avar = 0.0;
  DelaySamples samples;
};

struct ScenarioRun {
  std::vector<double> t;
  std::vector<double> active;
  std::vector<double> waiting;
  double delay = 0.0;
  double clearance_time = 0.0;
};

/**
 * Evaluates release policies on a fixed scenario set. Policies are reduced to their per-bin
 * release steps, and the delay samples of each distinct step vector are cached, so equal
 * policies give bit-identical objectives.
 */
class PolicyEvaluator {
public:
  explicit PolicyEvaluator(ScenarioSet set, std::shared_ptr<const NoiseBank> bank = nullptr);

  const ScenarioSet& scenarios() const noexcept { return set_; }
  std::shared_ptr<const NoiseBank> bank() const noexcept { return bank_; }

  /// Per-bin release step: the first step boundary at or after the release time.
  std::vector<std::int64_t> release_steps(const Policy& policy) const;

  const std::vector<double>& delays(const Policy& policy);
  /// Arbitrary (possibly non-monotone) release steps in [0, control_steps()].
  const std::vector<double>& delays_for_steps(const std::vector<std::int64_t>& steps);

  EvaluationResult evaluate(const Policy& policy, double beta, double alpha);
  double objective(const Policy& policy, double beta, double alpha);

  /// Trajectory of one scenario under the policy (not cached).
  ScenarioRun run(const Policy& policy, std::size_t scenario) const;

  std::size_t simulations() const noexcept { return memo_.size(); }
  std::size_t requests() const noexcept { return requests_; }

private:
  double simulate_one(std::size_t s, const std::vector<std::int64_t>& steps,
                      ScenarioRun* record) const;

  ScenarioSet set_;
  std::shared_ptr<const NoiseBank> bank_;
  std::map<std::vector<std::int64_t>, std::vector<double>> memo_;
  std::size_t requests_ = 0;
};

/// One-shot evaluation of a policy on a scenario set.
EvaluationResult evaluate_policy(const Policy& policy, const ScenarioSet& set, double beta,
                                 double alpha);

/// Demand source that evolves a surface with GBM noise and releases bins on step boundaries
/// per the policy; drives the generic simulate() with the same random stream as the
/// evaluator's noise bank.
class GbmDemandSource final : public DemandSource {
public:
  GbmDemandSource(DemandSurface surface, Policy policy, GbmParams gbm, double dt, Rng rng,
                  double horizon_h);
  std::vector<Cohort> release(double t, const CohortState& state) override;
  double waiting(double t) const override;
  void advance(double t, double dt) override;
  bool exhausted(double t) const override;
  double released() const noexcept { return released_; }

private:
  DemandSurface surface_;
  std::vector<std::int64_t> steps_;
  GbmParams gbm_;
  double dt_;
  Rng rng_;
  std::int64_t step_ = 0;
  double released_ = 0.0;
};

}  // namespace evac
