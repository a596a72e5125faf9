#pragma once

#include <stdexcept>
#include <string>

namespace treepressure {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A point was passed outside the domain of a map, or an orbit left it.
class DomainError : public Error {
 public:
  using Error::Error;
};

// An operation was called with arguments violating its precondition.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// A configured size cap (depth, period, set size) was exceeded.
class CapExceeded : public Error {
 public:
  using Error::Error;
};

// An iterative solver failed to reach its tolerance.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

}  // namespace treepressure
