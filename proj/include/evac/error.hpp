#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace evac {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// Scenario configuration failed validation; carries every violation found.
class ConfigError : public std::runtime_error {
public:
  explicit ConfigError(std::vector<std::string> violations);
  const std::vector<std::string>& violations() const noexcept { return violations_; }

private:
  std::vector<std::string> violations_;
};

/// Numerical procedure could not reach its target (budget, resolution, connectivity).
class NumericalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace evac
