#pragma once

#include <stdexcept>
#include <string>

namespace wick {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands live over Gaussian bases of different sizes.
class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// Malformed expansion input: duplicate multi-index, non-finite coefficient.
class InvalidExpansion : public Error {
 public:
  using Error::Error;
};

/// An argument is outside the domain of the operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Rescaling by E[X]^-n is undefined; the zero-mean regime applies instead.
class ZeroMeanError : public Error {
 public:
  using Error::Error;
};

class DegreeCapExceeded : public Error {
 public:
  using Error::Error;
};

}  // namespace wick
