#pragma once

#include <stdexcept>
#include <string>

namespace triconv {

/// Base class for all recoverable failures raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed parameter file or override.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// The radial phase is not monotone on the validated range: the cap
/// half-width r is too large for the chosen curve.
class MonotonicityViolated : public Error {
 public:
  using Error::Error;
};

/// Newton iteration and the bisection fallback both failed to invert the
/// radial phase (the requested level lies outside the monotone branch).
class NoConvergence : public Error {
 public:
  using Error::Error;
};

/// A grid quadrature changed by more than its declared tolerance under
/// refinement.
class GridUnresolved : public Error {
 public:
  using Error::Error;
};

}  // namespace triconv
