#pragma once

#include <stdexcept>
#include <string>

namespace mpctune {

// Invalid configuration, bounds, or user-supplied values.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Numerical failure: divergence, ill-conditioned factorization, etc.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

// Dynamics blew up mid-episode; carries the step index at which it happened.
class DivergenceError : public NumericError {
 public:
  DivergenceError(const std::string& msg, int step)
      : NumericError(msg + " (step " + std::to_string(step) + ")"), step_(step) {}
  int step() const { return step_; }

 private:
  int step_;
};

// Artifact on disk is missing fields or has an unknown schema version.
class SchemaError : public std::runtime_error {
 public:
  explicit SchemaError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace mpctune
