#pragma once

#include <utility>

namespace evac {

/**
 * Network speed-density relationship V(rho) and the induced flow Q(rho) = rho V(rho).
 *
 * Densities are per lane-km, speeds km/h, flows veh/h/lane. Three shapes are supported:
 *
 *   triangular:   V = v_f                      rho <= rho_c
 *                 V = w (rho_j - rho) / rho    rho >  rho_c
 *   trapezoidal:  V = v_f                      rho <= rho_1
 *                 V = q_max / rho              rho_1 < rho < rho_2
 *                 V = w (rho_j - rho) / rho    rho >= rho_2
 *   linear:       V = v_f (1 - rho / rho_j)
 *
 * Every shape returns 0 for rho >= rho_j. Instances are immutable.
 */
class SpeedDensityModel {
public:
  enum class Kind { Triangular, Trapezoidal, Linear };

  /// Triangular shape from free-flow speed, capacity and jam density; the wave speed
  /// follows from v_f rho_c = w (rho_j - rho_c) with rho_c = q_max / v_f.
  static SpeedDensityModel triangular(double free_flow_speed, double capacity, double jam_density);

  /// Triangular shape with an explicit wave speed; throws DomainError when the four
  /// values are not mutually consistent to `rel_tol`.
  static SpeedDensityModel triangular(double free_flow_speed, double capacity, double jam_density,
                                      double wave_speed, double rel_tol = 1e-6);

  /// Trapezoidal shape; capacity = v_f rho_1 and w = capacity / (rho_j - rho_2).
  static SpeedDensityModel trapezoidal(double free_flow_speed, double rho_1, double rho_2,
                                       double jam_density);

  static SpeedDensityModel linear(double free_flow_speed, double jam_density);

  Kind kind() const noexcept { return kind_; }
  double free_flow_speed() const noexcept { return v_f_; }
  double wave_speed() const noexcept { return w_; }
  double jam_density() const noexcept { return rho_j_; }
  double capacity() const noexcept { return q_max_; }

  double speed(double density) const;
  double flow(double density) const;

  /// Argmax of flow. For the trapezoidal flat top the midpoint of capacity_interval().
  double critical_density() const noexcept;

  /// Densities at which flow equals capacity; degenerate (a, a) except for trapezoidal.
  std::pair<double, double> capacity_interval() const noexcept;

private:
  SpeedDensityModel(Kind kind, double v_f, double w, double rho_j, double q_max, double rho_1,
                    double rho_2);

  Kind kind_;
  double v_f_;
  double w_;
  double rho_j_;
  double q_max_;
  double rho_1_;
  double rho_2_;
};

const char* to_string(SpeedDensityModel::Kind kind);

}  // namespace evac
