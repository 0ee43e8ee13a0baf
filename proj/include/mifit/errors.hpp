#pragma once

#include <stdexcept>
#include <string>

namespace mifit {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on the arguments was violated.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// Operands live on different grids or have incompatible fiber dimensions.
class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// An iterative routine did not converge.
class NumericalFailure : public Error {
 public:
  using Error::Error;
};

}  // namespace mifit
