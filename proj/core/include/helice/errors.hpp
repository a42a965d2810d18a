#pragma once

#include <stdexcept>
#include <string>

namespace helice {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// Run configuration could not be parsed or validated.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A numerical step failed (exit code 3 at the CLI).
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Every orthonormal function was dropped, leaving an empty radial basis.
class DegenerateBasisError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// A computed quantity violated an exact constraint beyond tolerance.
class ConsistencyError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// A state is outside the regime where a requested measure applies.
class AmbiguityError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace helice
