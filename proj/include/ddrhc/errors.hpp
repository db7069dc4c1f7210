#pragma once

#include <stdexcept>
#include <string>

namespace ddrhc {

/// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Malformed inputs: bad dimensions, non-finite data, invalid configuration.
struct ConfigError : Error {
  using Error::Error;
};

/// A set that must be nonempty is empty, a required feasible point does not
/// exist, or the data invalidate the model (no consistent system).
struct InfeasibleError : Error {
  using Error::Error;
};

/// Geometric preconditions violated: unbounded set where a bounded one is
/// required, gauge of a set without the origin in its interior, etc.
struct GeometryError : Error {
  using Error::Error;
};

/// Numerical breakdown inside a solver, distinct from provable infeasibility.
struct NumericalError : Error {
  using Error::Error;
};

}  // namespace ddrhc
