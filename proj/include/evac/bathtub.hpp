#pragma once

#include <iosfwd>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "evac/nfd.hpp"

namespace evac {

/// A group of vehicles sharing the same remaining distance (km). The tag labels the group
/// in completion records.
struct Cohort {
  double count = 0.0;
  double remaining = 0.0;
  int tag = 0;
};

struct Completion {
  double time = 0.0;  // h
  double count = 0.0;
  int tag = 0;
};

struct NetworkParams {
  double lane_km = 1.0;
  SpeedDensityModel model = SpeedDensityModel::linear(1.0, 1.0);
  double exit_capacity = 1.0;  // veh/h, diagnostic only
  double dt = 10.0 / 3600.0;   // h

  double speed_at(double active) const { return model.speed(active / lane_km); }
  void validate() const;
};

/**
 * Lagrangian representation of the active trips. All vehicles move at the common network
 * speed, so each cohort is stored by the odometer reading at which it exits; the state keeps
 * a min-heap of exit readings and a single shared odometer.
 */
class CohortState {
public:
  CohortState() = default;
  explicit CohortState(std::span<const Cohort> initial, double clock = 0.0);

  double clock() const noexcept { return clock_; }
  void set_clock(double t) noexcept { clock_ = t; }
  double active() const noexcept { return active_; }
  double completed() const noexcept { return completed_; }
  /// Initial plus injected vehicles.
  double injected() const noexcept { return injected_; }
  std::size_t size() const noexcept { return heap_.size(); }
  bool empty() const noexcept { return heap_.empty(); }
  double odometer() const noexcept { return odometer_; }

  /// Active cohorts with their current remaining distances, in heap order.
  std::vector<Cohort> cohorts() const;

  /// Smallest remaining distance; +inf when empty.
  double next_remaining() const noexcept;

  /// Throws DomainError for a negative or non-finite count or a non-positive distance.
  void inject(const Cohort& c);
  void inject(std::span<const Cohort> cs);

  /// Moves all vehicles forward by s km and retires every cohort whose exit reading is
  /// reached. Completion records are stamped with time t.
  void travel(double s, double t, std::vector<Completion>* log);

private:
  struct Entry {
    double exit_odometer;
    double count;
    int tag;
  };
  struct Later {
    bool operator()(const Entry& a, const Entry& b) const noexcept {
      return a.exit_odometer > b.exit_odometer;
    }
  };

  std::vector<Entry> heap_;
  double odometer_ = 0.0;
  double active_ = 0.0;
  double completed_ = 0.0;
  double injected_ = 0.0;
  double clock_ = 0.0;
};

struct Subinterval {
  double elapsed = 0.0;  // h
  double speed = 0.0;    // km/h during the subinterval
  double active = 0.0;   // accumulation during the subinterval
  bool completion = false;
};

/// Advances at constant speed until the earliest completion or max_dt, whichever is first.
/// Completions within 1e-9 of the step end are snapped to it.
Subinterval advance_until_event(CohortState& state, const NetworkParams& params, double max_dt,
                                std::vector<Completion>* log = nullptr);

/// Advances the state by dt with event splitting. Returns int active dt (veh h).
double advance(CohortState& state, const NetworkParams& params, double dt,
               std::vector<Completion>* log = nullptr);

/// One conservation-law step: inject the inflow, then advance by dt <= params.dt.
CohortState step(CohortState state, const NetworkParams& params, std::span<const Cohort> inflow,
                 double dt);

/// Source of vehicles for simulate(). release() is polled at each step start and right
/// after every completion event.
class DemandSource {
public:
  virtual ~DemandSource() = default;
  virtual std::vector<Cohort> release(double t, const CohortState& state) = 0;
  /// Vehicles waiting to be released at time t.
  virtual double waiting(double t) const = 0;
  /// Evolves the waiting demand over [t, t + dt]; called at each step end.
  virtual void advance(double t, double dt) {
    (void)t;
    (void)dt;
  }
  /// True once no further release can happen.
  virtual bool exhausted(double t) const = 0;
};

struct ScheduledRelease {
  double time = 0.0;
  std::vector<Cohort> cohorts;
};

/// Releases fixed cohorts at fixed times; waiting count from a user curve.
class ScheduleSource final : public DemandSource {
public:
  ScheduleSource(std::vector<ScheduledRelease> schedule, std::function<double(double)> waiting,
                 double horizon);
  std::vector<Cohort> release(double t, const CohortState& state) override;
  double waiting(double t) const override;
  bool exhausted(double t) const override;

private:
  std::vector<ScheduledRelease> schedule_;
  std::function<double(double)> waiting_;
  std::size_t next_ = 0;
};

struct TracePoint {
  double t = 0.0;
  double active = 0.0;
  double waiting = 0.0;
  double completed = 0.0;
  double injected = 0.0;
  double speed = 0.0;
  double delay = 0.0;  // cumulative veh h
};

struct SimulationTrace {
  std::vector<TracePoint> points;
  std::vector<Completion> completions;
  double delay = 0.0;
  double clearance_time = 0.0;  // time of the last completion
  bool exit_rate_flag = false;
  double max_exit_rate = 0.0;
};

struct SimulateOptions {
  bool stop_when_idle = true;  // stop once the network is empty and the source exhausted
  bool record_trace = true;
};

SimulationTrace simulate(CohortState initial, const NetworkParams& params, DemandSource& source,
                         double horizon, const SimulateOptions& options = {});

/// Fixed schedule variant. Throws DomainError on decreasing or out-of-range times.
SimulationTrace simulate(CohortState initial, const NetworkParams& params,
                         std::vector<ScheduledRelease> schedule,
                         std::function<double(double)> waiting, double horizon,
                         const SimulateOptions& options = {});

struct ExitRateReport {
  bool exceeded = false;
  double max_rate = 0.0;        // veh/h
  double max_exceedance = 0.0;  // veh/h above capacity
  double at_time = 0.0;         // start of the worst window
  std::size_t flagged_windows = 0;
};

/// Completion rate over consecutive windows of the given width (h) compared with capacity.
ExitRateReport exit_rate_check(const SimulationTrace& trace, double exit_capacity, double window);

void write_trace_csv(std::ostream& out, const SimulationTrace& trace);

}  // namespace evac
