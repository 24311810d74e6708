#pragma once

#include <stdexcept>
#include <string>

namespace tcstop {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Inconsistent shapes: non-square matrix, value/row count mismatch, bad index.
class StructuralError : public Error {
 public:
  using Error::Error;
};

/// A model, strategy or region violates a documented invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// The instance is larger than an exhaustive routine is allowed to handle.
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// Malformed input files.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace tcstop
