#pragma once

#include <stdexcept>
#include <string>

namespace subres {

/// Root of the library's exception hierarchy.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Non-finite or otherwise malformed numeric input.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Evaluation at a point outside the function's domain (z = 0 for Hankel,
/// coincident points for the logarithmic kernels, omega = 0).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Discretization parameters violating a quadrature guard.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Invalid resonator configuration (overlap, bad curve parameters, parse errors).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Decomposition failure, stagnation, non-convergence.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Fast path requested for geometry it does not support.
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

}  // namespace subres
