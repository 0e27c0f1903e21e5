#pragma once

#include <stdexcept>
#include <string>

namespace procstory {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed input file or completion text. Carries a 1-based line number
/// when one is known (0 otherwise).
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line = 0)
      : Error(line ? what + " (line " + std::to_string(line) + ")" : what),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// A domain invariant does not hold for otherwise well-formed data.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Bad run configuration: missing paths, inconsistent options.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A remote dependency (parser, encoder, completion service) failed after
/// the configured retries.
class ServiceError : public Error {
 public:
  using Error::Error;
};

/// Tensor shape or dimension mismatch between model components.
class DimensionError : public Error {
 public:
  using Error::Error;
};

}  // namespace procstory
