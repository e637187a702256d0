#pragma once

#include <stdexcept>
#include <string>

namespace wavelab {

// Bad user-supplied parameter (sigma out of range, invalid config, ...).
struct parameter_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Grid or problem size exceeds a hard guard (dense paths, dyadic blocks).
struct capacity_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Mismatched grids between operands.
struct dimension_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Corrupt or malformed on-disk data (ZFLD, JSON models).
struct format_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Non-finite values, NaN during time stepping, quadrature failure.
struct numerical_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Iterative solver or root finder failed to meet its contract.
struct solver_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace wavelab
