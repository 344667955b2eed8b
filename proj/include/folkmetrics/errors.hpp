#pragma once

#include <stdexcept>
#include <string>

namespace folkmetrics {

// Base of every error raised by the library. The CLI maps these to exit 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input violates an operation's mathematical domain (empty input, zero vector, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

class NotFoundError : public Error {
 public:
  using Error::Error;
};

// Input text looks like it was read with the wrong delimiter or schema.
class FormatError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// A rank or Pearson correlation over fewer than two points or a constant vector.
class UndefinedCorrelation : public DomainError {
 public:
  using DomainError::DomainError;
};

}  // namespace folkmetrics
