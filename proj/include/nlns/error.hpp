#pragma once

#include <stdexcept>
#include <string>

namespace nlns {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad input: out-of-range parameters, malformed config, mismatched grids.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Non-finite values, density floor violations, unstable steps.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// File missing, unreadable or malformed on disk.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace nlns
