#include "evac/demand.hpp"

#include <cmath>
#include <ostream>
#include <numeric>
#include <stdexcept>

#include "evac/error.hpp"

namespace evac {

Rng make_rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
                    0x9e3779b9u};
  return Rng(seq);
}

double DemandSurface::total() const { return std::accumulate(mass.begin(), mass.end(), 0.0); }

void DemandSurface::validate() const {
  if (edges.size() != mass.size() + 1 || mass.empty()) {
    throw DomainError("demand surface needs bins + 1 edges");
  }
  for (std::size_t i = 1; i < edges.size(); ++i) {
    if (!(edges[i] > edges[i - 1])) throw DomainError("bin edges must be strictly increasing");
  }
  if (edges.front() < 0.0) throw DomainError("bin edges must be non-negative");
  for (double m : mass) {
    if (!(m >= 0.0) || !std::isfinite(m)) throw DomainError("bin mass must be finite, >= 0");
  }
}

void GbmParams::validate() const {
  if (!(volatility >= 0.0) || !std::isfinite(volatility)) {
    throw DomainError("volatility must be non-negative");
  }
  if (!std::isfinite(drift)) throw DomainError("drift must be finite");
}

std::vector<double> uniform_edges(double lo, double hi, std::size_t bins) {
  if (bins == 0 || !(hi > lo)) throw DomainError("uniform edges need bins > 0 and hi > lo");
  return uniform_grid(lo, hi, bins + 1);
}

DemandSurface init_surface(double total, const TripLengthDistribution& dist,
                           std::span<const double> edges) {
  if (!(total >= 0.0)) throw DomainError("total demand must be non-negative");
  if (edges.size() < 2) throw DomainError("need at least one bin");
  if (edges.front() > dist.distance.front() + 1e-12) {
    throw DomainError("bins start above the distribution support");
  }
  if (edges.back() < dist.support_max() * (1.0 - 1e-9)) {
    throw DomainError("bins end before the distribution support");
  }
  DemandSurface s;
  s.edges.assign(edges.begin(), edges.end());
  s.mass.resize(edges.size() - 1);
  double prev = dist.cdf_at(edges.front());
  for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
    const double next = dist.cdf_at(edges[k + 1]);
    s.mass[k] = total * std::max(0.0, next - prev);
    prev = next;
  }
  s.validate();
  return s;
}

double effective_volatility(const GbmParams& p, double bin_width) {
  return p.volatility / std::sqrt(bin_width);
}

void evolve_inplace(DemandSurface& surface, const GbmParams& p, double dt, Rng& rng) {
  if (!(dt > 0.0)) throw DomainError("evolve needs dt > 0");
  std::normal_distribution<double> normal(0.0, 1.0);
  const double sqdt = std::sqrt(dt);
  for (std::size_t k = 0; k < surface.bins(); ++k) {
    const double sigma = effective_volatility(p, surface.width(k));
    const double z = (p.volatility > 0.0) ? normal(rng) : 0.0;
    surface.mass[k] *= std::exp((p.drift - 0.5 * sigma * sigma) * dt + sigma * sqdt * z);
  }
  surface.clock += dt;
}

DemandSurface evolve(DemandSurface surface, const GbmParams& p, double dt, Rng& rng) {
  evolve_inplace(surface, p, dt, rng);
  return surface;
}

ReleaseResult release(DemandSurface surface, const Policy& policy, double t) {
  if (!(t >= 0.0)) throw DomainError("release time must be non-negative");
  const std::vector<double> due = bin_release_times(policy, surface.edges);
  ReleaseResult out;
  const double tol = 1e-12 * std::max(1.0, std::abs(t));
  for (std::size_t k = 0; k < surface.bins(); ++k) {
    if (due[k] <= t + tol && surface.mass[k] > 0.0) {
      out.inflow.push_back({surface.mass[k], surface.midpoint(k), static_cast<int>(k)});
      surface.mass[k] = 0.0;
    }
  }
  out.surface = std::move(surface);
  return out;
}

void write_surface_csv(std::ostream& out, const DemandSurface& surface) {
  out.precision(12);
  out << "lower_km,upper_km,mass_veh\n";
  for (std::size_t k = 0; k < surface.bins(); ++k) {
    out << surface.edges[k] << ',' << surface.edges[k + 1] << ',' << surface.mass[k] << '\n';
  }
}

}  // namespace evac
