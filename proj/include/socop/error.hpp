#pragma once

#include <stdexcept>
#include <string>

namespace socop {

/// Malformed input data: bad probabilities, ragged CSV rows, labels out of range.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Inconsistent or out-of-range settings (alpha, lambda grid, split sizes, ...).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace socop
