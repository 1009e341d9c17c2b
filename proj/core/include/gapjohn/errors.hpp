#pragma once

#include <stdexcept>
#include <string>

namespace gapjohn {

// Base class for every error raised by the library.  The CLI maps the
// concrete subclasses onto exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A documented precondition or hypothesis does not hold.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

class HypothesisNotMet : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

// An enumeration would exceed the caller's size budget.
class CapExceeded : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

// Integer arithmetic on group coordinates left the 64-bit range.
class OverflowError : public Error {
 public:
  using Error::Error;
};

}  // namespace gapjohn
