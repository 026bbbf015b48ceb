#pragma once

#include <stdexcept>
#include <string>

namespace signet {

// Invalid parameters, malformed configs, broken type invariants.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Solver breakdowns, non-convergence, out-of-range numerics.
struct NumericError : std::runtime_error {
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace signet
