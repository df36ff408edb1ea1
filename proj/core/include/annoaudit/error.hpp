#pragma once

#include <stdexcept>
#include <string>

namespace annoaudit {

/// Base of every error raised by the library. The CLI maps these to exit code 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input text (bad JSON, truncated binary, wrong magic).
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Well-formed input that violates a data invariant (unknown label, duplicate record).
class SchemaError : public Error {
 public:
  using Error::Error;
};

/// A computation whose inputs fall outside its mathematical domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Reference to an id that does not exist.
class LookupError : public Error {
 public:
  using Error::Error;
};

/// Invalid parameters (fraction outside [0,1], zero epochs, ...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace annoaudit
