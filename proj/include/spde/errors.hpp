#pragma once

#include <stdexcept>
#include <string>

namespace spde {

/// Bad arguments or inconsistent configuration. CLI maps this to exit code 1.
class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

/// Non-finite values or a numerically impossible request discovered at run
/// time. Carries enough context (step, node, mode) to locate the failure.
/// CLI maps this to exit code 2.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace spde
