#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace vartopic {

/// Bad input: a precondition on values, shapes or identifiers was violated.
class ValidationError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Malformed input text. `line()` is 1-based, 0 when unknown.
class ParseError : public std::runtime_error {
  public:
    ParseError(const std::string& what, std::size_t line)
        : std::runtime_error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
          line_(line) {}

    std::size_t line() const noexcept { return line_; }

  private:
    std::size_t line_;
};

/// An iterative solver ran out of iterations.
class ConvergenceError : public std::runtime_error {
  public:
    ConvergenceError(const std::string& what, std::vector<double> residuals)
        : std::runtime_error(what), residuals_(std::move(residuals)) {}

    const std::vector<double>& residuals() const noexcept { return residuals_; }

  private:
    std::vector<double> residuals_;
};

/// A root-finding problem has no solution for the given target.
class NoSolutionError : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

} // namespace vartopic
