#pragma once

#include <stdexcept>
#include <string>

namespace ardl {

/// Bad configuration: unknown keys, invalid parameter values, missing files
/// named by a config. CLI exit code 2.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed or inconsistent data: CSV parse failures, duplicate cells,
/// missing-value holes in a slice that must be complete. CLI exit code 3.
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

/// Numerical estimation failure: rank deficiency, insufficient sample,
/// degenerate inputs to a test. CLI exit code 4.
class EstimationError : public std::runtime_error {
 public:
  explicit EstimationError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace ardl
