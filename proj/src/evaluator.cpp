#include "evac/evaluator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "evac/error.hpp"
#include "evac/parallel.hpp"

namespace evac {

namespace {

std::int64_t step_of(double t, double dt) {
  return static_cast<std::int64_t>(std::ceil(t / dt - 1e-9));
}

std::vector<std::int64_t> steps_from_times(const std::vector<double>& times, double dt,
                                           std::int64_t max_step) {
  std::vector<std::int64_t> out(times.size());
  for (std::size_t k = 0; k < times.size(); ++k) {
    out[k] = std::clamp<std::int64_t>(step_of(times[k], dt), 0, max_step);
  }
  return out;
}

void validate_policy(const Policy& policy, double horizon) {
  if (const auto* bb = std::get_if<BangBangPolicy>(&policy)) {
    bb->validate(horizon);
  } else {
    std::get<ReleaseTimeMap>(policy).validate(horizon);
  }
}

}  // namespace

void ScenarioSet::validate() const {
  if (count == 0) throw DomainError("scenario set is empty");
  gbm.validate();
  demand.validate();
  network.validate();
  if (!(horizon_h >= 0.0)) throw DomainError("horizon must be non-negative");
  if (!(clearance_cap_h > 0.0)) throw DomainError("clearance allowance must be positive");
}

std::int64_t ScenarioSet::control_steps() const { return step_of(horizon_h, network.dt); }

NoiseBank::NoiseBank(const ScenarioSet& set)
    : seed_(set.master_seed),
      offset_(set.stream_offset),
      gbm_(set.gbm),
      edges_(set.demand.edges),
      dt_(set.network.dt),
      scenarios_(set.count),
      bins_(set.demand.bins()),
      steps_(set.control_steps()),
      deterministic_(set.gbm.volatility == 0.0) {
  set.validate();
  const double growth = gbm_.drift * dt_;
  if (deterministic_) {
    det_.resize(static_cast<std::size_t>(steps_) + 1);
    for (std::int64_t n = 0; n <= steps_; ++n) {
      det_[static_cast<std::size_t>(n)] = std::exp(growth * static_cast<double>(n));
    }
    return;
  }
  const std::size_t per = (static_cast<std::size_t>(steps_) + 1) * bins_;
  data_.resize(scenarios_ * per);
  std::vector<double> sigma(bins_);
  for (std::size_t k = 0; k < bins_; ++k) {
    sigma[k] = effective_volatility(gbm_, set.demand.width(k));
  }
  const double sqdt = std::sqrt(dt_);
  parallel_for(scenarios_, [&](std::size_t s) {
    Rng rng = make_rng(seed_, offset_ + s);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> cumulative(bins_, 1.0);
    float* out = &data_[s * per];
    for (std::size_t k = 0; k < bins_; ++k) out[k] = 1.0f;
    for (std::int64_t n = 1; n <= steps_; ++n) {
      float* row = out + static_cast<std::size_t>(n) * bins_;
      for (std::size_t k = 0; k < bins_; ++k) {
        const double z = normal(rng);
        cumulative[k] *= std::exp((gbm_.drift - 0.5 * sigma[k] * sigma[k]) * dt_ +
                                  sigma[k] * sqdt * z);
        row[k] = static_cast<float>(cumulative[k]);
      }
    }
  });
}

double NoiseBank::factor(std::size_t s, std::int64_t n, std::size_t k) const {
  if (deterministic_) return det_[static_cast<std::size_t>(n)];
  const std::size_t per = (static_cast<std::size_t>(steps_) + 1) * bins_;
  return data_[s * per + static_cast<std::size_t>(n) * bins_ + k];
}

bool NoiseBank::compatible(const ScenarioSet& set) const {
  return set.master_seed == seed_ && set.stream_offset == offset_ && set.count == scenarios_ &&
         set.gbm.drift == gbm_.drift && set.gbm.volatility == gbm_.volatility &&
         set.demand.edges == edges_ && set.network.dt == dt_ && set.control_steps() <= steps_;
}

PolicyEvaluator::PolicyEvaluator(ScenarioSet set, std::shared_ptr<const NoiseBank> bank)
    : set_(std::move(set)), bank_(std::move(bank)) {
  set_.validate();
  if (bank_) {
    if (!bank_->compatible(set_)) throw DomainError("noise bank built for another scenario set");
  } else {
    bank_ = std::make_shared<const NoiseBank>(set_);
  }
}

std::vector<std::int64_t> PolicyEvaluator::release_steps(const Policy& policy) const {
  validate_policy(policy, set_.horizon_h);
  return steps_from_times(bin_release_times(policy, set_.demand.edges), set_.network.dt,
                          set_.control_steps());
}

const std::vector<double>& PolicyEvaluator::delays(const Policy& policy) {
  return delays_for_steps(release_steps(policy));
}

const std::vector<double>& PolicyEvaluator::delays_for_steps(
    const std::vector<std::int64_t>& steps) {
  ++requests_;
  if (steps.size() != set_.demand.bins()) throw DomainError("release steps size mismatch");
  for (std::int64_t n : steps) {
    if (n < 0 || n > set_.control_steps()) throw DomainError("release step outside the horizon");
  }
  // Bins without demand never matter; normalise them so equivalent policies share a key.
  std::vector<std::int64_t> key = steps;
  for (std::size_t k = 0; k < key.size(); ++k) {
    if (set_.demand.mass[k] == 0.0) key[k] = 0;
  }
  auto it = memo_.find(key);
  if (it != memo_.end()) return it->second;
  std::vector<double> out(set_.count);
  parallel_for(set_.count, [&](std::size_t s) { out[s] = simulate_one(s, key, nullptr); });
  return memo_.emplace(std::move(key), std::move(out)).first->second;
}

EvaluationResult PolicyEvaluator::evaluate(const Policy& policy, double beta, double alpha) {
  EvaluationResult r;
  r.samples.values = delays(policy);
  r.samples.seeds.resize(set_.count);
  std::iota(r.samples.seeds.begin(), r.samples.seeds.end(), set_.stream_offset);
  r.mean = evac::mean(r.samples.values);
  r.avar = evac::avar(r.samples.values, alpha);
  r.objective = evac::objective(r.samples.values, beta, alpha);
  return r;
}

double PolicyEvaluator::objective(const Policy& policy, double beta, double alpha) {
  return evac::objective(delays(policy), beta, alpha);
}

ScenarioRun PolicyEvaluator::run(const Policy& policy, std::size_t scenario) const {
  if (scenario >= set_.count) throw DomainError("scenario index out of range");
  ScenarioRun rec;
  rec.delay = simulate_one(scenario, release_steps(policy), &rec);
  return rec;
}

double PolicyEvaluator::simulate_one(std::size_t s, const std::vector<std::int64_t>& steps,
                                     ScenarioRun* record) const {
  const NetworkParams& net = set_.network;
  const DemandSurface& demand = set_.demand;
  const double dt = net.dt;
  std::vector<std::size_t> order;
  order.reserve(demand.bins());
  for (std::size_t k = 0; k < demand.bins(); ++k) {
    if (demand.mass[k] > 0.0) order.push_back(k);
  }
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return steps[a] < steps[b]; });

  CohortState state(set_.initial_active);
  const std::int64_t cap =
      set_.control_steps() + static_cast<std::int64_t>(std::ceil(set_.clearance_cap_h / dt));
  std::size_t next = 0;
  double delay = 0.0;
  std::vector<Completion> completions;
  for (std::int64_t n = 0;; ++n) {
    while (next < order.size() && steps[order[next]] <= n) {
      const std::size_t k = order[next++];
      state.inject(Cohort{demand.mass[k] * bank_->factor(s, n, k), demand.midpoint(k),
                          static_cast<int>(k)});
    }
    double waiting = 0.0;
    for (std::size_t q = next; q < order.size(); ++q) {
      const std::size_t k = order[q];
      waiting += demand.mass[k] * bank_->factor(s, n, k);
    }
    if (record) {
      record->t.push_back(static_cast<double>(n) * dt);
      record->active.push_back(state.active());
      record->waiting.push_back(waiting);
    }
    if (state.empty() && next == order.size()) break;
    if (n >= cap) throw NumericalError("network did not clear within the simulated time");
    delay += advance(state, net, dt, record ? &completions : nullptr) + waiting * dt;
  }
  if (record && !completions.empty()) record->clearance_time = completions.back().time;
  return delay;
}

EvaluationResult evaluate_policy(const Policy& policy, const ScenarioSet& set, double beta,
                                 double alpha) {
  PolicyEvaluator evaluator(set);
  return evaluator.evaluate(policy, beta, alpha);
}

GbmDemandSource::GbmDemandSource(DemandSurface surface, Policy policy, GbmParams gbm, double dt,
                                 Rng rng, double horizon_h)
    : surface_(std::move(surface)), gbm_(gbm), dt_(dt), rng_(std::move(rng)) {
  validate_policy(policy, horizon_h);
  steps_ = steps_from_times(bin_release_times(policy, surface_.edges), dt_,
                            step_of(horizon_h, dt_));
}

std::vector<Cohort> GbmDemandSource::release(double t, const CohortState&) {
  std::vector<Cohort> out;
  if (std::abs(t - dt_ * static_cast<double>(step_)) > 1e-9 * dt_) return out;
  for (std::size_t k = 0; k < surface_.bins(); ++k) {
    if (steps_[k] <= step_ && surface_.mass[k] > 0.0) {
      out.push_back({surface_.mass[k], surface_.midpoint(k), static_cast<int>(k)});
      released_ += surface_.mass[k];
      surface_.mass[k] = 0.0;
    }
  }
  return out;
}

double GbmDemandSource::waiting(double) const { return surface_.total(); }

void GbmDemandSource::advance(double, double dt) {
  evolve_inplace(surface_, gbm_, dt, rng_);
  ++step_;
}

bool GbmDemandSource::exhausted(double) const { return surface_.total() == 0.0; }

}  // namespace evac
