#pragma once

#include <stdexcept>
#include <string>

namespace abfrac {

/// Base of every error raised by the library. Each subclass maps to one
/// failure category of the public operations (and to one CLI exit code).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parameter outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A special-function evaluation could not reach its tolerance.
class NonConvergence : public Error {
 public:
  using Error::Error;
};

/// Malformed sampling grid.
class GridError : public Error {
 public:
  using Error::Error;
};

/// B(alpha) - lambda (1 - alpha) is (numerically) zero.
class SingularParameter : public Error {
 public:
  using Error::Error;
};

/// Fixed-point iteration exhausted its budget.
class NoConvergence : public Error {
 public:
  using Error::Error;
};

/// Input would drive a Mittag-Leffler argument into the overflow regime.
class RangeError : public Error {
 public:
  using Error::Error;
};

/// Laplace variable sits on (or within tolerance of) the transform pole.
class PoleError : public Error {
 public:
  using Error::Error;
};

/// Truncated forward transform would be unreliable (s T too small).
class TailError : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// Invalid user-facing configuration (CLI flags, config file values).
class ValidationError : public Error {
 public:
  using Error::Error;
};

}  // namespace abfrac
