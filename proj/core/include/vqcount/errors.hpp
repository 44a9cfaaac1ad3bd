#pragma once

#include <stdexcept>
#include <string>

namespace vqcount {

/// Base of every error raised by the library. The CLI maps the concrete
/// subclasses onto process exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Caller passed arguments that violate a documented precondition.
class InputError : public Error {
 public:
  using Error::Error;
};

/// Instance or config text could not be parsed.
class ParseError : public InputError {
 public:
  ParseError(const std::string& what, std::size_t line)
      : InputError("line " + std::to_string(line) + ": " + what), line_(line) {}
  explicit ParseError(const std::string& what) : InputError(what), line_(0) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// A qubit/variable cap was exceeded.
class ResourceError : public Error {
 public:
  using Error::Error;
};

/// Non-finite values appeared in a simulation or objective.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// Random ensemble sampling ran out of its rejection budget.
class GenerationError : public Error {
 public:
  using Error::Error;
};

/// No field convention makes the Ising ground space equal the solution set.
class MappingError : public Error {
 public:
  using Error::Error;
};

/// A self-reduction step had no solutions to work with.
class StepError : public Error {
 public:
  using Error::Error;
};

}  // namespace vqcount
