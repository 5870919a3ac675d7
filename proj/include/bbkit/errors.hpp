#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace bbkit {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid arguments or an inconsistent specification (bad dimension, k > n, ...).
class SpecError : public Error {
 public:
  using Error::Error;
};

/// Input outside the mathematical domain of a function.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Ask/tell protocol violated (unknown trial, double tell).
class ProtocolError : public Error {
 public:
  using Error::Error;
};

/// The trial budget of a task has been used up.
class ExhaustedError : public Error {
 public:
  using Error::Error;
};

/// Exact computation would exceed the configured work limit.
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// A (task, optimizer[, seed]) grid has missing cells.
class CompletenessError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// Malformed serialized input; `line()` is 1-based, 0 when not line-oriented.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line = 0)
      : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace bbkit
