#pragma once

#include <cstddef>
#include <vector>

#include "evac/geometry.hpp"

namespace evac {

/// Two disks joined by a thin straight corridor along the x axis; the exit is a point in
/// the left disk.
struct DumbbellZone {
  Point left_centre{-3.0, 0.0};
  Point right_centre{3.0, 0.0};
  double disk_radius = 1.0;
  double corridor_half_width = 0.1;
  Point exit{-3.0, 0.0};
  double resolution = 0.02;  // km per raster cell

  bool contains(Point p) const;

  /// Throws DomainError on degenerate shapes, an exit outside the left disk, or a raster
  /// coarser than a quarter of the corridor half-width.
  void validate() const;
};

/// Geodesic distance to the exit on a cell-centred raster of the zone's bounding box.
struct GeodesicRaster {
  Point origin;  // centre of cell (0, 0)
  double resolution = 0.0;
  std::size_t nx = 0;
  std::size_t ny = 0;
  std::vector<char> inside;
  std::vector<double> distance;  // +inf outside the zone

  Point cell_centre(std::size_t ix, std::size_t iy) const;
  /// Distance of the cell containing p; +inf when p falls outside the zone.
  double at(Point p) const;
};

/// 8-connected Dijkstra with Euclidean edge weights. Throws NumericalError when some inside
/// cell cannot reach the exit.
GeodesicRaster geodesic_raster(const DumbbellZone& zone);

/// Trip-length distribution of origins uniform over the zone, from the area-weighted
/// histogram of raster geodesic distances.
TripLengthDistribution dumbbell_distribution(const DumbbellZone& zone, double bin_width = 0.05);

}  // namespace evac
