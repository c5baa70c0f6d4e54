#pragma once

#include <stdexcept>
#include <string>

namespace curvedk {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Operands live in incompatible fields or variable contexts.
class ContextMismatch : public Error {
public:
  using Error::Error;
};

/// Matrix or module shapes do not line up.
class ShapeMismatch : public Error {
public:
  using Error::Error;
};

/// A division that was required to be exact left a remainder.
class DivisionError : public Error {
public:
  using Error::Error;
};

/// A constructor-level invariant (curvature, isotropy, ...) failed.
class InvariantError : public Error {
public:
  using Error::Error;
};

/// Malformed textual input.
class ParseError : public Error {
public:
  using Error::Error;
};

} // namespace curvedk
