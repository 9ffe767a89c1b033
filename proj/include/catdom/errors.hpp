#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace catdom {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  DimensionMismatch(std::size_t expected, std::size_t got)
      : Error("dimension mismatch: expected " + std::to_string(expected) + ", got " +
              std::to_string(got)) {}
};

/// Two measures with different total mass were compared.
class MassMismatch : public Error {
 public:
  MassMismatch(const std::string& lhs, const std::string& rhs)
      : Error("mass mismatch: " + lhs + " vs " + rhs) {}
};

/// A convolution power produced more atoms than the caller allowed.
class AtomBudgetExceeded : public Error {
 public:
  AtomBudgetExceeded(std::size_t atoms, std::size_t cap)
      : Error("atom budget exceeded: " + std::to_string(atoms) + " atoms > cap " +
              std::to_string(cap)) {}
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Input text could not be parsed. Line and column are 1-based; 0 means unknown.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line = 0, std::size_t column = 0)
      : Error(format(what, line, column)), line_(line), column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  static std::string format(const std::string& what, std::size_t line, std::size_t column) {
    if (line == 0) return "parse error: " + what;
    return "parse error at line " + std::to_string(line) + ", column " + std::to_string(column) +
           ": " + what;
  }

  std::size_t line_;
  std::size_t column_;
};

}  // namespace catdom
