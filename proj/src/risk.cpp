#include "evac/risk.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "evac/error.hpp"

namespace evac {

namespace {

void check_alpha(double alpha) {
  if (!(alpha >= 0.0) || !(alpha < 1.0)) throw DomainError("alpha must lie in [0, 1)");
}

void check_non_empty(std::span<const double> xs) {
  if (xs.empty()) throw DomainError("risk functional of an empty sample");
}

}  // namespace

void DelaySamples::validate() const {
  if (values.empty()) throw DomainError("delay samples are empty");
  for (double v : values) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw DomainError("delay samples must be finite, >= 0");
  }
  if (!seeds.empty() && seeds.size() != values.size()) {
    throw DomainError("seed list length differs from sample count");
  }
}

double mean(std::span<const double> xs) {
  check_non_empty(xs);
  return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

double avar(std::span<const double> xs, double alpha) {
  check_non_empty(xs);
  check_alpha(alpha);
  std::vector<double> sorted(xs.begin(), xs.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  const double cut = alpha * n;
  // Index (1-based) of the quantile atom; the atom contributes only the part above the cut.
  const auto k = static_cast<std::size_t>(std::ceil(cut - 1e-12));
  double tail = 0.0;
  for (std::size_t i = std::max<std::size_t>(k, 1); i < sorted.size(); ++i) tail += sorted[i];
  if (k == 0) {
    tail += sorted[0];
  } else {
    tail += (static_cast<double>(k) - cut) * sorted[k - 1];
  }
  return tail / ((1.0 - alpha) * n);
}

double avar(const DelaySamples& samples, double alpha) { return avar(samples.values, alpha); }

double ru_function(std::span<const double> xs, double alpha, double eta) {
  check_non_empty(xs);
  check_alpha(alpha);
  double excess = 0.0;
  for (double x : xs) excess += std::max(0.0, x - eta);
  return eta + excess / (static_cast<double>(xs.size()) * (1.0 - alpha));
}

double objective(std::span<const double> xs, double beta, double alpha) {
  if (!(beta >= 0.0)) throw DomainError("risk weight must be non-negative");
  const double m = mean(xs);
  return beta == 0.0 ? m : m + beta * avar(xs, alpha);
}

double objective(const DelaySamples& samples, double beta, double alpha) {
  return objective(samples.values, beta, alpha);
}

}  // namespace evac
