#pragma once

#include <string>
#include <vector>

namespace evac {

/// Bridge capacity from lane counts: (lanes * directions * structures - reserved) * per_lane.
struct Bridge {
  std::string name;
  int lanes = 1;       // per direction and structure
  int directions = 2;
  int structures = 1;  // parallel carriageways or bridges
  int reserved = 1;    // lanes kept for emergency traffic
  double per_lane = 2000.0;  // veh/h
  double stated = 0.0;       // published capacity, veh/h (0 when none)

  double formula() const;
};

std::vector<Bridge> amager_bridges();

struct BridgeCheck {
  std::string name;
  double formula = 0.0;
  double stated = 0.0;
  double used = 0.0;  // stated when given, else formula
  bool mismatch = false;
};

struct CapacityReport {
  std::vector<BridgeCheck> bridges;
  double total = 0.0;           // sum of used capacities, veh/h
  double formula_total = 0.0;
  double clearance_bound_min = 0.0;  // N / total
};

CapacityReport capacity_report(const std::vector<Bridge>& bridges, double total_vehicles);

}  // namespace evac
