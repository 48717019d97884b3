#pragma once

#include <stdexcept>
#include <string>

namespace strukt {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad shapes, bad grades, unknown names.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// A hypothesis of an analytic bound does not hold. Carries the offending
// quantity and the bound it had to stay below.
class PreconditionError : public Error {
 public:
  PreconditionError(const std::string& what, double value, double bound)
      : Error(what + " (value " + std::to_string(value) + ", bound " +
              std::to_string(bound) + ")"),
        value_(value),
        bound_(bound) {}

  double value() const { return value_; }
  double bound() const { return bound_; }

 private:
  double value_;
  double bound_;
};

class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace strukt
