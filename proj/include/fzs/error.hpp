#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fzs {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A value or document violates a stated invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Malformed rule document. Line and column are 1-based.
class SyntaxError : public ValidationError {
 public:
  SyntaxError(const std::string& what, std::size_t line, std::size_t column)
      : ValidationError("line " + std::to_string(line) + ", column " + std::to_string(column) +
                        ": " + what),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// Aggregated output set is identically zero.
class NoRuleFiredError : public Error {
 public:
  NoRuleFiredError() : Error("no rule fired") {}
};

/// File could not be read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace fzs
