#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace collab {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input text. Carries the 1-based line and column of the offending cell.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : Error(what), line_(line), column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// Well-formed input that violates a structural invariant (ragged rows, duplicate names, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A computation whose inputs collapse it (zero-width line, identical abscissae, ...).
class DegenerateError : public Error {
 public:
  using Error::Error;
};

/// A search region with no admissible point.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

}  // namespace collab
