#pragma once

#include <stdexcept>
#include <string>

namespace trajbound {

// Exit codes used by the command line front end.
enum class ExitCode : int {
  ok = 0,
  usage = 1,
  format = 2,
  estimation = 3,
  divergence = 4,
};

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual ExitCode exit_code() const noexcept { return ExitCode::usage; }
};

// Argument outside the documented domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Requested dimension is outside what an algorithm supports.
class UnsupportedDimension : public DomainError {
 public:
  using DomainError::DomainError;
};

// An estimator had too little usable signal to produce a value.
class EstimationError : public Error {
 public:
  using Error::Error;
  ExitCode exit_code() const noexcept override { return ExitCode::estimation; }
};

// Non-finite intermediate result or an iteration that failed to converge.
class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& what, double last_value = 0.0)
      : Error(what), last_value_(last_value) {}
  ExitCode exit_code() const noexcept override { return ExitCode::estimation; }
  double last_value() const noexcept { return last_value_; }

 private:
  double last_value_;
};

// Invariant broken inside the library; indicates a bug rather than bad input.
class InternalError : public Error {
 public:
  using Error::Error;
};

// Malformed or truncated file.
class FormatError : public Error {
 public:
  using Error::Error;
  ExitCode exit_code() const noexcept override { return ExitCode::format; }
};

// Training loss or SDE state left the bounded region; carries the step index.
class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& what, std::size_t step)
      : Error(what + " at step " + std::to_string(step)), step_(step) {}
  ExitCode exit_code() const noexcept override { return ExitCode::divergence; }
  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

}  // namespace trajbound
