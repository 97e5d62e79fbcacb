#pragma once

#include <stdexcept>
#include <string>

namespace harvest {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A specification or argument violates a documented precondition.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A numerical routine produced a result that fails its internal consistency checks.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace harvest
