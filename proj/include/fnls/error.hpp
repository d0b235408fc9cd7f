#pragma once

#include <stdexcept>
#include <string>

namespace fnls {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Two objects that must share a time grid (or a frequency cutoff) do not.
class GridMismatch : public Error {
 public:
  using Error::Error;
};

/// The time integrator produced a non-finite coefficient.
class NonFiniteState : public Error {
 public:
  using Error::Error;
};

/// Rejection sampling exhausted its proposal budget.
class SamplerCapExceeded : public Error {
 public:
  using Error::Error;
};

/// A discrete transform cannot resolve the requested quantity.
class ResolutionError : public Error {
 public:
  using Error::Error;
};

inline void require(bool condition, const std::string& message) {
  if (!condition) throw InvalidArgument(message);
}

}  // namespace fnls
