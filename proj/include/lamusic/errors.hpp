#pragma once

#include <stdexcept>
#include <string>

namespace lamusic {

/// Invalid input or configuration. The CLI maps this to exit code 1.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Numerical failure (singular system, overflow, quadrature not converged).
/// The CLI maps this to exit code 2.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of a special function.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace lamusic
