#pragma once

// Repository-wide units: distance km, time h, density veh/km/lane, flow veh/h.
// Hydraulics (flood module) works in m and s and converts at its boundary.

#include <numbers>

namespace evac::units {

inline constexpr double kSecondsPerHour = 3600.0;
inline constexpr double kMetresPerKm = 1000.0;
inline constexpr double kPi = std::numbers::pi;

constexpr double seconds_to_hours(double s) { return s / kSecondsPerHour; }
constexpr double hours_to_seconds(double h) { return h * kSecondsPerHour; }
constexpr double minutes_to_hours(double m) { return m / 60.0; }
constexpr double hours_to_minutes(double h) { return h * 60.0; }
constexpr double km_to_m(double km) { return km * kMetresPerKm; }
constexpr double m_to_km(double m) { return m / kMetresPerKm; }
constexpr double deg_to_rad(double deg) { return deg * kPi / 180.0; }
constexpr double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

}  // namespace evac::units
