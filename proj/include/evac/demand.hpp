#pragma once

#include <iosfwd>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "evac/bathtub.hpp"
#include "evac/geometry.hpp"
#include "evac/policy.hpp"

namespace evac {

using Rng = std::mt19937_64;

/// Generator for stream `stream` under master seed `seed`; independent of thread scheduling.
Rng make_rng(std::uint64_t seed, std::uint64_t stream);

/// Un-released demand per trip-length bin (veh).
struct DemandSurface {
  std::vector<double> edges;  // km, strictly increasing, size bins + 1
  std::vector<double> mass;   // veh, size bins
  double clock = 0.0;         // h

  std::size_t bins() const noexcept { return mass.size(); }
  double total() const;
  double midpoint(std::size_t k) const { return 0.5 * (edges[k] + edges[k + 1]); }
  double width(std::size_t k) const { return edges[k + 1] - edges[k]; }
  void validate() const;
};

struct GbmParams {
  double drift = 0.0;       // 1/h
  double volatility = 0.0;  // per sqrt(h), per unit bin width
  void validate() const;
};

std::vector<double> uniform_edges(double lo, double hi, std::size_t bins);

/// m_k = N (F(e_{k+1}) - F(e_k)). Throws DomainError when the edges miss part of the support.
DemandSurface init_surface(double total, const TripLengthDistribution& dist,
                           std::span<const double> edges);

/// Per-bin volatility sigma / sqrt(width), the white-noise discretisation.
double effective_volatility(const GbmParams& p, double bin_width);

/// Multiplicative update of every bin with one standard normal draw per bin, drawn in bin
/// order whether or not the bin still holds mass.
void evolve_inplace(DemandSurface& surface, const GbmParams& p, double dt, Rng& rng);
DemandSurface evolve(DemandSurface surface, const GbmParams& p, double dt, Rng& rng);

struct ReleaseResult {
  std::vector<Cohort> inflow;
  DemandSurface surface;
};

/// Drains the bins due at time t under the policy: one cohort per bin at its midpoint.
ReleaseResult release(DemandSurface surface, const Policy& policy, double t);

void write_surface_csv(std::ostream& out, const DemandSurface& surface);

}  // namespace evac
