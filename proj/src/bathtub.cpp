#include "evac/bathtub.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <limits>
#include <map>
#include <stdexcept>

#include "evac/error.hpp"

namespace evac {

void NetworkParams::validate() const {
  if (!(lane_km > 0.0)) throw DomainError("lane length must be positive");
  if (!(dt > 0.0)) throw DomainError("time step must be positive");
  if (!(exit_capacity > 0.0)) throw DomainError("exit capacity must be positive");
}

CohortState::CohortState(std::span<const Cohort> initial, double clock) : clock_(clock) {
  inject(initial);
}

std::vector<Cohort> CohortState::cohorts() const {
  std::vector<Cohort> out;
  out.reserve(heap_.size());
  for (const Entry& e : heap_) out.push_back({e.count, e.exit_odometer - odometer_, e.tag});
  return out;
}

double CohortState::next_remaining() const noexcept {
  if (heap_.empty()) return std::numeric_limits<double>::infinity();
  return heap_.front().exit_odometer - odometer_;
}

void CohortState::inject(const Cohort& c) {
  if (!(c.count >= 0.0) || !std::isfinite(c.count)) {
    throw DomainError("cohort count must be finite and non-negative");
  }
  if (!(c.remaining > 0.0) || !std::isfinite(c.remaining)) {
    throw DomainError("cohort distance must be finite and positive");
  }
  if (c.count == 0.0) return;
  heap_.push_back({odometer_ + c.remaining, c.count, c.tag});
  std::push_heap(heap_.begin(), heap_.end(), Later{});
  active_ += c.count;
  injected_ += c.count;
}

void CohortState::inject(std::span<const Cohort> cs) {
  for (const Cohort& c : cs) inject(c);
}

void CohortState::travel(double s, double t, std::vector<Completion>* log) {
  if (s < 0.0) throw DomainError("travel distance must be non-negative");
  odometer_ += s;
  const double tol = 1e-12 * std::max(1.0, std::abs(odometer_));
  while (!heap_.empty() && heap_.front().exit_odometer <= odometer_ + tol) {
    std::pop_heap(heap_.begin(), heap_.end(), Later{});
    const Entry e = heap_.back();
    heap_.pop_back();
    active_ -= e.count;
    completed_ += e.count;
    if (log) log->push_back({t, e.count, e.tag});
  }
  if (heap_.empty()) active_ = 0.0;
}

Subinterval advance_until_event(CohortState& state, const NetworkParams& params, double max_dt,
                                std::vector<Completion>* log) {
  Subinterval sub;
  sub.active = state.active();
  sub.speed = params.speed_at(sub.active);
  if (state.empty() || !(sub.speed > 0.0)) {
    sub.elapsed = max_dt;
    state.set_clock(state.clock() + max_dt);
    return sub;
  }
  const double need = state.next_remaining();
  const double hit = need / sub.speed;
  const double snap = 1e-9 * params.dt;
  if (hit <= max_dt + snap) {
    sub.elapsed = (std::abs(hit - max_dt) <= snap) ? max_dt : hit;
    sub.completion = true;
    state.travel(need, state.clock() + sub.elapsed, log);
  } else {
    sub.elapsed = max_dt;
    state.travel(sub.speed * max_dt, state.clock() + max_dt, log);
  }
  state.set_clock(state.clock() + sub.elapsed);
  return sub;
}

double advance(CohortState& state, const NetworkParams& params, double dt,
               std::vector<Completion>* log) {
  double remaining = dt;
  double integral = 0.0;
  const double start = state.clock();
  while (remaining > 1e-12 * params.dt) {
    if (state.empty()) {
      break;
    }
    Subinterval sub = advance_until_event(state, params, remaining, log);
    integral += sub.active * sub.elapsed;
    remaining -= sub.elapsed;
  }
  state.set_clock(start + dt);
  return integral;
}

CohortState step(CohortState state, const NetworkParams& params, std::span<const Cohort> inflow,
                 double dt) {
  if (!(dt > 0.0) || dt > params.dt * (1.0 + 1e-12)) {
    throw DomainError("step length must lie in (0, params.dt]");
  }
  state.inject(inflow);
  advance(state, params, dt);
  return state;
}

ScheduleSource::ScheduleSource(std::vector<ScheduledRelease> schedule,
                               std::function<double(double)> waiting, double horizon)
    : schedule_(std::move(schedule)), waiting_(std::move(waiting)) {
  for (std::size_t i = 0; i < schedule_.size(); ++i) {
    const double t = schedule_[i].time;
    if (!(t >= 0.0) || t > horizon) throw DomainError("schedule time outside [0, horizon]");
    if (i > 0 && t < schedule_[i - 1].time) throw DomainError("schedule times must not decrease");
  }
}

std::vector<Cohort> ScheduleSource::release(double t, const CohortState&) {
  std::vector<Cohort> out;
  const double tol = 1e-12 * std::max(1.0, std::abs(t));
  while (next_ < schedule_.size() && schedule_[next_].time <= t + tol) {
    const auto& cs = schedule_[next_].cohorts;
    out.insert(out.end(), cs.begin(), cs.end());
    ++next_;
  }
  return out;
}

double ScheduleSource::waiting(double t) const { return waiting_ ? waiting_(t) : 0.0; }

bool ScheduleSource::exhausted(double) const { return next_ >= schedule_.size(); }

SimulationTrace simulate(CohortState initial, const NetworkParams& params, DemandSource& source,
                         double horizon, const SimulateOptions& options) {
  params.validate();
  CohortState state = std::move(initial);
  const double t0 = state.clock();
  if (horizon < t0) throw DomainError("horizon precedes the initial clock");
  SimulationTrace trace;
  auto record = [&](double t, double speed) {
    if (!options.record_trace) return;
    trace.points.push_back({t, state.active(), source.waiting(t), state.completed(),
                            state.injected(), speed, trace.delay});
  };
  record(t0, params.speed_at(state.active()));
  const double dt = params.dt;
  const double eps = 1e-12 * dt;
  for (std::size_t n = 0;; ++n) {
    const double t = t0 + dt * static_cast<double>(n);
    if (t >= horizon - eps) break;
    const double length = std::min(dt, horizon - t);
    state.set_clock(t);
    state.inject(source.release(t, state));
    double now = t;
    double remaining = length;
    double speed = params.speed_at(state.active());
    while (remaining > eps) {
      const double w = source.waiting(now);
      Subinterval sub = advance_until_event(state, params, remaining, &trace.completions);
      trace.delay += (sub.active + w) * sub.elapsed;
      now += sub.elapsed;
      remaining -= sub.elapsed;
      speed = sub.speed;
      if (sub.completion) {
        trace.clearance_time = now;
        if (remaining > eps) {
          state.inject(source.release(now, state));
          record(now, speed);
        }
      }
    }
    source.advance(t, length);
    state.set_clock(t + length);
    record(t + length, params.speed_at(state.active()));
    if (options.stop_when_idle && state.empty() && source.exhausted(t + length) &&
        source.waiting(t + length) == 0.0) {
      break;
    }
  }
  ExitRateReport rate = exit_rate_check(trace, params.exit_capacity, params.dt);
  trace.exit_rate_flag = rate.exceeded;
  trace.max_exit_rate = rate.max_rate;
  return trace;
}

SimulationTrace simulate(CohortState initial, const NetworkParams& params,
                         std::vector<ScheduledRelease> schedule,
                         std::function<double(double)> waiting, double horizon,
                         const SimulateOptions& options) {
  ScheduleSource source(std::move(schedule), std::move(waiting), horizon);
  return simulate(std::move(initial), params, source, horizon, options);
}

ExitRateReport exit_rate_check(const SimulationTrace& trace, double exit_capacity, double window) {
  if (!(window > 0.0)) throw DomainError("exit-rate window must be positive");
  ExitRateReport report;
  std::map<long long, double> per_window;
  for (const Completion& c : trace.completions) {
    per_window[static_cast<long long>(std::floor(c.time / window * (1.0 - 1e-12)))] += c.count;
  }
  for (const auto& [k, count] : per_window) {
    const double rate = count / window;
    if (rate > report.max_rate) {
      report.max_rate = rate;
      report.at_time = static_cast<double>(k) * window;
    }
    if (rate > exit_capacity) {
      report.exceeded = true;
      ++report.flagged_windows;
      report.max_exceedance = std::max(report.max_exceedance, rate - exit_capacity);
    }
  }
  return report;
}

void write_trace_csv(std::ostream& out, const SimulationTrace& trace) {
  out.precision(12);
  out << "t_h,active_veh,waiting_veh,completed_veh,speed_kmh,delay_cum_veh_h\n";
  for (const TracePoint& p : trace.points) {
    out << p.t << ',' << p.active << ',' << p.waiting << ',' << p.completed << ',' << p.speed
        << ',' << p.delay << '\n';
  }
}

}  // namespace evac
