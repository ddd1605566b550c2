#include "evac/dumbbell.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>

#include "evac/error.hpp"

namespace evac {

bool DumbbellZone::contains(Point p) const {
  if (distance(p, left_centre) <= disk_radius) return true;
  if (distance(p, right_centre) <= disk_radius) return true;
  return std::abs(p.y - left_centre.y) <= corridor_half_width && p.x >= left_centre.x &&
         p.x <= right_centre.x;
}

void DumbbellZone::validate() const {
  if (!(disk_radius > 0.0)) throw DomainError("dumbbell disk radius must be positive");
  if (!(corridor_half_width > 0.0) || corridor_half_width >= disk_radius) {
    throw DomainError("corridor half-width must lie in (0, disk radius)");
  }
  if (left_centre.y != right_centre.y || !(right_centre.x > left_centre.x)) {
    throw DomainError("dumbbell disks must lie on a horizontal line, left before right");
  }
  if (distance(exit, left_centre) > disk_radius) {
    throw DomainError("dumbbell exit must lie in the left disk");
  }
  if (!(resolution > 0.0) || resolution > corridor_half_width / 4.0) {
    throw DomainError("raster resolution must be positive and <= corridor half-width / 4");
  }
}

Point GeodesicRaster::cell_centre(std::size_t ix, std::size_t iy) const {
  return {origin.x + resolution * static_cast<double>(ix),
          origin.y + resolution * static_cast<double>(iy)};
}

double GeodesicRaster::at(Point p) const {
  double fx = std::round((p.x - origin.x) / resolution);
  double fy = std::round((p.y - origin.y) / resolution);
  if (fx < 0.0 || fy < 0.0 || fx >= static_cast<double>(nx) || fy >= static_cast<double>(ny)) {
    return std::numeric_limits<double>::infinity();
  }
  return distance[static_cast<std::size_t>(fy) * nx + static_cast<std::size_t>(fx)];
}

GeodesicRaster geodesic_raster(const DumbbellZone& zone) {
  zone.validate();
  const double h = zone.resolution;
  const double xmin = zone.left_centre.x - zone.disk_radius;
  const double xmax = zone.right_centre.x + zone.disk_radius;
  const double ymin = zone.left_centre.y - zone.disk_radius;
  const double ymax = zone.left_centre.y + zone.disk_radius;

  GeodesicRaster raster;
  raster.resolution = h;
  raster.nx = static_cast<std::size_t>(std::floor((xmax - xmin) / h)) + 1;
  raster.ny = static_cast<std::size_t>(std::floor((ymax - ymin) / h)) + 1;
  const double span_x = h * static_cast<double>(raster.nx - 1);
  const double span_y = h * static_cast<double>(raster.ny - 1);
  raster.origin = {0.5 * (xmin + xmax) - 0.5 * span_x, 0.5 * (ymin + ymax) - 0.5 * span_y};
  const std::size_t cells = raster.nx * raster.ny;
  raster.inside.assign(cells, 0);
  raster.distance.assign(cells, std::numeric_limits<double>::infinity());
  for (std::size_t iy = 0; iy < raster.ny; ++iy) {
    for (std::size_t ix = 0; ix < raster.nx; ++ix) {
      raster.inside[iy * raster.nx + ix] = zone.contains(raster.cell_centre(ix, iy)) ? 1 : 0;
    }
  }

  // Source: inside cell nearest to the exit point.
  std::size_t source = cells;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < cells; ++c) {
    if (!raster.inside[c]) continue;
    double dd = distance(raster.cell_centre(c % raster.nx, c / raster.nx), zone.exit);
    if (dd < best) {
      best = dd;
      source = c;
    }
  }
  if (source == cells) throw NumericalError("dumbbell raster has no inside cells");

  using Entry = std::pair<double, std::size_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
  raster.distance[source] = 0.0;
  queue.emplace(0.0, source);
  const double diag = h * std::sqrt(2.0);
  while (!queue.empty()) {
    auto [dist, c] = queue.top();
    queue.pop();
    if (dist > raster.distance[c]) continue;
    const auto ix = static_cast<long>(c % raster.nx);
    const auto iy = static_cast<long>(c / raster.nx);
    for (long dy = -1; dy <= 1; ++dy) {
      for (long dx = -1; dx <= 1; ++dx) {
        if (dx == 0 && dy == 0) continue;
        long jx = ix + dx;
        long jy = iy + dy;
        if (jx < 0 || jy < 0 || jx >= static_cast<long>(raster.nx) ||
            jy >= static_cast<long>(raster.ny)) {
          continue;
        }
        std::size_t n = static_cast<std::size_t>(jy) * raster.nx + static_cast<std::size_t>(jx);
        if (!raster.inside[n]) continue;
        double cand = dist + ((dx != 0 && dy != 0) ? diag : h);
        if (cand < raster.distance[n]) {
          raster.distance[n] = cand;
          queue.emplace(cand, n);
        }
      }
    }
  }
  for (std::size_t c = 0; c < cells; ++c) {
    if (raster.inside[c] && !std::isfinite(raster.distance[c])) {
      throw NumericalError("dumbbell raster is disconnected: a cell cannot reach the exit");
    }
  }
  return raster;
}

TripLengthDistribution dumbbell_distribution(const DumbbellZone& zone, double bin_width) {
  if (!(bin_width > 0.0)) throw DomainError("bin width must be positive");
  GeodesicRaster raster = geodesic_raster(zone);
  double longest = 0.0;
  std::size_t count = 0;
  for (std::size_t c = 0; c < raster.distance.size(); ++c) {
    if (!raster.inside[c]) continue;
    longest = std::max(longest, raster.distance[c]);
    ++count;
  }
  const auto bins = static_cast<std::size_t>(std::ceil(longest / bin_width)) + 1;
  std::vector<std::size_t> hits(bins, 0);
  for (std::size_t c = 0; c < raster.distance.size(); ++c) {
    if (!raster.inside[c]) continue;
    ++hits[std::min(bins - 1, static_cast<std::size_t>(raster.distance[c] / bin_width))];
  }
  // Empirical CDF interpolated linearly inside each bin, sampled at bin centres and both ends.
  std::vector<double> grid{0.0};
  std::vector<double> cdf{0.0};
  const auto total = static_cast<double>(count);
  std::size_t below = 0;
  for (std::size_t k = 0; k < bins; ++k) {
    grid.push_back((static_cast<double>(k) + 0.5) * bin_width);
    cdf.push_back((static_cast<double>(below) + 0.5 * static_cast<double>(hits[k])) / total);
    below += hits[k];
  }
  grid.push_back(static_cast<double>(bins) * bin_width);
  cdf.push_back(1.0);
  return TripLengthDistribution::from_cdf(std::move(grid), std::move(cdf), 1.0);
}

}  // namespace evac
