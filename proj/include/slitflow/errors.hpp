#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace slitflow {

/// A point or parameter outside the region where a quantity is defined
/// (barrier line, exclusion disk, non-propagating medium, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Density |psi|^2 at or below the floor; phase-derived quantities undefined.
class DegenerateDensityError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class InvalidSeedError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Streamline or solution has too few points (or too little extent) for a diagnostic.
class TooShortError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Adaptive integrator could not meet its tolerances.
class StepFailureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string &what, std::size_t line = 0)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}

  /// 1-based source line, 0 when not tied to a file line.
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace slitflow
