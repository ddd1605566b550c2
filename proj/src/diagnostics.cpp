#include "evac/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "evac/error.hpp"

namespace evac {

namespace {

/// Exact integral of the piecewise-linear CDF over [0, upper].
double integrated_cdf(const TripLengthDistribution& dist, double upper) {
  double total = 0.0;
  const auto& x = dist.distance;
  const auto& f = dist.cdf;
  if (upper <= x.front()) return 0.0;
  for (std::size_t i = 1; i < x.size(); ++i) {
    if (x[i - 1] >= upper) break;
    const double hi = std::min(x[i], upper);
    const double w = (hi - x[i - 1]) / (x[i] - x[i - 1]);
    const double f_hi = f[i - 1] + w * (f[i] - f[i - 1]);
    total += 0.5 * (f[i - 1] + f_hi) * (hi - x[i - 1]);
  }
  if (upper > x.back()) total += upper - x.back();
  return total;
}

double interpolate(std::span<const double> xs, std::span<const double> ys, double x) {
  if (x <= xs.front()) return ys.front();
  if (x >= xs.back()) return ys.back();
  auto it = std::upper_bound(xs.begin(), xs.end(), x);
  auto hi = static_cast<std::size_t>(it - xs.begin());
  auto lo = hi - 1;
  const double w = (x - xs[lo]) / (xs[hi] - xs[lo]);
  return ys[lo] + w * (ys[hi] - ys[lo]);
}

}  // namespace

double ControlDiagnostics::concavity_violation() const {
  double scale = 0.0;
  for (double s : service) scale = std::max(scale, std::abs(s));
  if (scale == 0.0) return 0.0;
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i + 1 < service.size(); ++i) {
    const double h0 = queue[i] - queue[i - 1];
    const double h1 = queue[i + 1] - queue[i];
    // Second divided difference scaled back to a uniform-step second difference.
    const double d2 = 2.0 * ((service[i + 1] - service[i]) / h1 - (service[i] - service[i - 1]) / h0) /
                      (h0 + h1) * h0 * h1;
    worst = std::max(worst, d2);
  }
  return worst / scale;
}

double ControlDiagnostics::slope_at(double queue_value) const {
  return interpolate(queue, slope, queue_value);
}

ControlDiagnostics service_rate(const TripLengthDistribution& dist,
                                const SpeedDensityModel& model, double lane_km,
                                double headway_h, std::span<const double> queue_grid) {
  if (!(headway_h > 0.0)) throw DomainError("headway must be positive");
  if (!(lane_km > 0.0)) throw DomainError("lane length must be positive");
  if (queue_grid.size() < 3) throw DomainError("queue grid needs at least three points");
  for (std::size_t i = 1; i < queue_grid.size(); ++i) {
    if (!(queue_grid[i] > queue_grid[i - 1])) throw DomainError("queue grid must increase");
  }
  ControlDiagnostics diag;
  diag.headway_h = headway_h;
  diag.queue.assign(queue_grid.begin(), queue_grid.end());
  diag.service.resize(queue_grid.size());
  for (std::size_t i = 0; i < queue_grid.size(); ++i) {
    const double v = model.speed(queue_grid[i] / lane_km);
    const double reach = headway_h * v;
    diag.service[i] = std::max(0.0, v - integrated_cdf(dist, reach) / headway_h);
  }
  const std::size_t n = queue_grid.size();
  diag.slope.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = i == 0 ? 0 : i - 1;
    const std::size_t hi = i + 1 == n ? i : i + 1;
    diag.slope[i] = (diag.service[hi] - diag.service[lo]) / (diag.queue[hi] - diag.queue[lo]);
  }
  return diag;
}

CostateTrajectory costate_trajectory(const ControlDiagnostics& diag,
                                     std::span<const double> times,
                                     std::span<const double> queue, double horizon, double step) {
  if (times.size() != queue.size() || times.size() < 2) {
    throw DomainError("queue trajectory needs matching times and values");
  }
  if (!(step > 0.0) || !(horizon > 0.0)) throw DomainError("costate step and horizon > 0");
  if (times.front() > 0.0 || times.back() < horizon * (1.0 - 1e-12)) {
    throw DomainError("queue trajectory must cover [0, T]");
  }
  auto rhs = [&](double t, double p) {
    return -1.0 + p * diag.slope_at(interpolate(times, queue, t));
  };
  const auto steps = static_cast<std::size_t>(std::ceil(horizon / step - 1e-9));
  const double h = horizon / static_cast<double>(steps);
  CostateTrajectory out;
  out.t.resize(steps + 1);
  out.p.resize(steps + 1);
  out.t[steps] = horizon;
  out.p[steps] = 0.0;
  double p = 0.0;
  for (std::size_t i = steps; i > 0; --i) {
    const double t = h * static_cast<double>(i);
    const double k1 = rhs(t, p);
    const double k2 = rhs(t - 0.5 * h, p - 0.5 * h * k1);
    const double k3 = rhs(t - 0.5 * h, p - 0.5 * h * k2);
    const double k4 = rhs(t - h, p - h * k3);
    p -= h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    out.t[i - 1] = h * static_cast<double>(i - 1);
    out.p[i - 1] = p;
  }
  int last_sign = 0;
  for (std::size_t i = 0; i < steps; ++i) {
    const int sign = out.p[i] > 0.0 ? 1 : (out.p[i] < 0.0 ? -1 : 0);
    if (sign == 0) continue;
    if (last_sign != 0 && sign != last_sign) ++out.zero_crossings;
    last_sign = sign;
  }
  return out;
}

}  // namespace evac
