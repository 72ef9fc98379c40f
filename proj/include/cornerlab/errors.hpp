#pragma once

#include <stdexcept>
#include <string>

namespace cornerlab {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed geometry or mesh parameters.
class GeometryError : public Error {
 public:
  using Error::Error;
};

/// A closed-form quantity hits a vanishing denominator or determinant.
class DegenerateError : public Error {
 public:
  using Error::Error;
};

/// The requested exponent cannot be realized by a positive coefficient jump.
class SignError : public Error {
 public:
  using Error::Error;
};

/// Root bracket without a sign change.
class NoSignChangeError : public Error {
 public:
  using Error::Error;
};

/// Iterative method did not reach its tolerance.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// Bad input to an estimator or analysis (empty samples, too few radii, ...).
class InputError : public Error {
 public:
  using Error::Error;
};

/// Precondition of a verification check does not hold.
class HypothesisError : public Error {
 public:
  using Error::Error;
};

/// Configuration file or command-line problem.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace cornerlab
