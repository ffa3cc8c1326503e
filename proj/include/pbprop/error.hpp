#pragma once

#include <stdexcept>
#include <string>

namespace pbprop {

// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Malformed input: bad syntax, unknown ids, out-of-range values.
class InputError : public Error {
public:
  using Error::Error;
};

// An enumeration or solver cap was exceeded.
class LimitExceeded : public Error {
public:
  using Error::Error;
};

// An operation was called on an instance it is not defined for
// (e.g. Phragmen on cardinal utilities).
class PreconditionError : public Error {
public:
  using Error::Error;
};

// A laminar-only operation was called on an instance that is not laminar.
class NotLaminarError : public PreconditionError {
public:
  using PreconditionError::PreconditionError;
};

} // namespace pbprop
