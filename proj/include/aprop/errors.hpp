#pragma once

#include <stdexcept>
#include <string>

namespace aprop {

// Invalid arguments, unsupported orders, singular coefficients.
struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A series or quadrature did not reach the requested tolerance.
struct ConvergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bad or missing configuration input.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace aprop
