#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace evac {

/// Total delay per scenario (veh h) with the seeds that produced them.
struct DelaySamples {
  std::vector<double> values;
  std::vector<std::uint64_t> seeds;

  void validate() const;
};

double mean(std::span<const double> xs);

/**
 * Empirical average value at risk at level alpha (Rockafellar-Uryasev with the empirical
 * measure): the tail mean above the alpha-quantile with the quantile atom weighted by its
 * fractional share.
 */
double avar(std::span<const double> xs, double alpha);
double avar(const DelaySamples& samples, double alpha);

/// Rockafellar-Uryasev function eta + E[(X - eta)^+] / (1 - alpha).
double ru_function(std::span<const double> xs, double alpha, double eta);

/// mean + beta * avar.
double objective(std::span<const double> xs, double beta, double alpha);
double objective(const DelaySamples& samples, double beta, double alpha);

}  // namespace evac
