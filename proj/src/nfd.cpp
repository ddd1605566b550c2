#include "evac/nfd.hpp"

#include <cmath>
#include <string>

#include "evac/error.hpp"

namespace evac {

namespace {

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw DomainError(std::string("speed-density model: ") + name + " must be positive, got " +
                      std::to_string(v));
  }
}

}  // namespace

SpeedDensityModel::SpeedDensityModel(Kind kind, double v_f, double w, double rho_j, double q_max,
                                     double rho_1, double rho_2)
    : kind_(kind), v_f_(v_f), w_(w), rho_j_(rho_j), q_max_(q_max), rho_1_(rho_1), rho_2_(rho_2) {}

SpeedDensityModel SpeedDensityModel::triangular(double free_flow_speed, double capacity,
                                                double jam_density) {
  require_positive(free_flow_speed, "free-flow speed");
  require_positive(capacity, "capacity");
  require_positive(jam_density, "jam density");
  const double rho_c = capacity / free_flow_speed;
  if (rho_c >= jam_density) {
    throw DomainError("triangular model: critical density q_max/v_f = " + std::to_string(rho_c) +
                      " must be below jam density " + std::to_string(jam_density));
  }
  const double w = capacity / (jam_density - rho_c);
  return {Kind::Triangular, free_flow_speed, w, jam_density, capacity, rho_c, rho_c};
}

SpeedDensityModel SpeedDensityModel::triangular(double free_flow_speed, double capacity,
                                                double jam_density, double wave_speed,
                                                double rel_tol) {
  auto model = triangular(free_flow_speed, capacity, jam_density);
  require_positive(wave_speed, "wave speed");
  if (std::abs(model.w_ - wave_speed) > rel_tol * model.w_) {
    throw DomainError("triangular model: inconsistent parameters, v_f rho_c = w (rho_j - rho_c) "
                      "requires w = " + std::to_string(model.w_) + ", got " +
                      std::to_string(wave_speed));
  }
  return model;
}

SpeedDensityModel SpeedDensityModel::trapezoidal(double free_flow_speed, double rho_1,
                                                 double rho_2, double jam_density) {
  require_positive(free_flow_speed, "free-flow speed");
  require_positive(rho_1, "rho_1");
  require_positive(jam_density, "jam density");
  if (!(rho_1 < rho_2 && rho_2 < jam_density)) {
    throw DomainError("trapezoidal model: need 0 < rho_1 < rho_2 < rho_j");
  }
  const double q_max = free_flow_speed * rho_1;
  const double w = q_max / (jam_density - rho_2);
  return {Kind::Trapezoidal, free_flow_speed, w, jam_density, q_max, rho_1, rho_2};
}

SpeedDensityModel SpeedDensityModel::linear(double free_flow_speed, double jam_density) {
  require_positive(free_flow_speed, "free-flow speed");
  require_positive(jam_density, "jam density");
  const double rho_c = 0.5 * jam_density;
  return {Kind::Linear, free_flow_speed, free_flow_speed, jam_density,
          free_flow_speed * rho_c * 0.5, rho_c, rho_c};
}

double SpeedDensityModel::speed(double density) const {
  if (!(density >= 0.0)) {
    throw DomainError("speed: density must be non-negative, got " + std::to_string(density));
  }
  if (density >= rho_j_) return 0.0;
  switch (kind_) {
    case Kind::Linear:
      return v_f_ * (1.0 - density / rho_j_);
    case Kind::Triangular:
      if (density <= rho_1_) return v_f_;
      return w_ * (rho_j_ - density) / density;
    case Kind::Trapezoidal:
      if (density <= rho_1_) return v_f_;
      if (density < rho_2_) return q_max_ / density;
      return w_ * (rho_j_ - density) / density;
  }
  return 0.0;
}

double SpeedDensityModel::flow(double density) const { return density * speed(density); }

double SpeedDensityModel::critical_density() const noexcept { return 0.5 * (rho_1_ + rho_2_); }

std::pair<double, double> SpeedDensityModel::capacity_interval() const noexcept {
  return {rho_1_, rho_2_};
}

const char* to_string(SpeedDensityModel::Kind kind) {
  switch (kind) {
    case SpeedDensityModel::Kind::Triangular: return "triangular";
    case SpeedDensityModel::Kind::Trapezoidal: return "trapezoidal";
    case SpeedDensityModel::Kind::Linear: return "linear";
  }
  return "unknown";
}

}  // namespace evac
