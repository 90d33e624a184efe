#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace netrobust {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed edge-list input. Carries the 1-based line number (0 when the
/// error is not tied to a line, e.g. empty input).
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Invalid parameters (generator params, counts, budgets, ...).
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// A call's precondition does not hold (missing node, duplicate edge, ...).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// The value is undefined for this input (disconnected graph, n < 2, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Effective resistance of a disconnected graph.
class InfiniteResistanceError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Iterative eigensolver ran out of iterations.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double best_residual)
      : Error(what), best_residual_(best_residual) {}
  double best_residual() const noexcept { return best_residual_; }

 private:
  double best_residual_;
};

/// No feasible defense action was found within the resampling budget.
class FeasibilityError : public Error {
 public:
  using Error::Error;
};

}  // namespace netrobust
