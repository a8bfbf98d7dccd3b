#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace estimability {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A precondition on the arguments was violated.
class InvalidInput : public Error {
public:
  using Error::Error;
};

/// Two finite maps whose shapes do not compose.
class CompositionError : public InvalidInput {
public:
  using InvalidInput::InvalidInput;
};

/// A requested target (e.g. a discrepancy residual) lies outside the attainable range.
class NoSolution : public InvalidInput {
public:
  using InvalidInput::InvalidInput;
};

/// Malformed text input. Carries the 1-based line number.
class ParseError : public InvalidInput {
public:
  ParseError(std::size_t line, const std::string &what)
      : InvalidInput("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

/// An iterative or limiting computation did not converge.
class NumericalFailure : public Error {
public:
  using Error::Error;
};

} // namespace estimability
