#include "evac/capacity.hpp"

#include <cmath>

#include "evac/error.hpp"

namespace evac {

double Bridge::formula() const {
  const int usable = lanes * directions * structures - reserved;
  if (usable <= 0) throw DomainError("bridge " + name + " has no usable lanes");
  return static_cast<double>(usable) * per_lane;
}

std::vector<Bridge> amager_bridges() {
  return {
      {"E20", 4, 2, 1, 1, 2400.0, 16800.0},
      {"Langebro", 6, 2, 1, 1, 2000.0, 22000.0},
      {"Kalvebod", 3, 2, 2, 1, 2400.0, 31200.0},
      {"Knippelsbro", 3, 2, 1, 1, 2000.0, 10000.0},
  };
}

CapacityReport capacity_report(const std::vector<Bridge>& bridges, double total_vehicles) {
  CapacityReport report;
  for (const Bridge& b : bridges) {
    BridgeCheck c;
    c.name = b.name;
    c.formula = b.formula();
    c.stated = b.stated;
    c.used = b.stated > 0.0 ? b.stated : c.formula;
    c.mismatch = b.stated > 0.0 && std::abs(b.stated - c.formula) > 0.5;
    report.total += c.used;
    report.formula_total += c.formula;
    report.bridges.push_back(c);
  }
  if (report.total > 0.0) report.clearance_bound_min = total_vehicles / report.total * 60.0;
  return report;
}

}  // namespace evac
