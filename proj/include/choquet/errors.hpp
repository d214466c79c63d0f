#pragma once

#include <stdexcept>
#include <string>

namespace choquet {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad arguments or configuration supplied by the caller.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Malformed or inconsistent input data (files, score sets).
class DataError : public Error {
 public:
  using Error::Error;
};

/// A numeric routine failed to reach its tolerance. Indicates a bug rather
/// than bad user input.
class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace choquet
