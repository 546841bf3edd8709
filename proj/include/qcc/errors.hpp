#pragma once

#include <stdexcept>
#include <string>

namespace qcc {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A phase point lies outside the model's domain (JC: q1^2 + p1^2 >= 4J).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// No positive p2 reproduces the requested energy.
class InfeasibleEnergyError : public Error {
 public:
  using Error::Error;
};

/// Matrix storage would exceed the configured memory budget.
class ResourceError : public Error {
 public:
  using Error::Error;
};

/// Initial state leaks too much probability into the basis boundary.
class TruncationError : public Error {
 public:
  using Error::Error;
};

/// Energy drift along an integrated trajectory exceeded its budget.
class IntegrationError : public Error {
 public:
  using Error::Error;
};

/// Malformed arguments: wrong sizes, non-Hermitian matrices, empty inputs.
class InputError : public Error {
 public:
  using Error::Error;
};

class EmptyLinesError : public InputError {
 public:
  using InputError::InputError;
};

class InvalidDensityError : public InputError {
 public:
  using InputError::InputError;
};

class LookupError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace qcc
