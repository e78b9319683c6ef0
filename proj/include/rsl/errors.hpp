#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rsl {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed coefficient expression. `offset` is the 0-based byte position.
class ParseError : public Error {
 public:
  enum class Kind { Syntax, UnknownIdentifier, Arity };

  ParseError(Kind kind, std::size_t offset, const std::string& what);

  Kind kind() const noexcept { return kind_; }
  std::size_t offset() const noexcept { return offset_; }

 private:
  Kind kind_;
  std::size_t offset_;
};

/// Domain failure while evaluating an expression (pole, sqrt of a negative, overflow).
class EvalError : public Error {
 public:
  EvalError(double x, const std::string& what);
  double x() const noexcept { return x_; }

 private:
  double x_;
};

/// Problem document is incomplete or violates a problem invariant.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Failure inside the delay integrator (lookahead, step underflow, bad query).
class IntegrationError : public Error {
 public:
  using Error::Error;
};

/// Fixed-point iteration did not reach tolerance.
class ConvergenceError : public Error {
 public:
  ConvergenceError(double last_ratio, const std::string& what);
  double last_ratio() const noexcept { return last_ratio_; }

 private:
  double last_ratio_;
};

/// An asymptotic formula was requested outside its domain of validity.
class UnavailableError : public Error {
 public:
  using Error::Error;
};

}  // namespace rsl
