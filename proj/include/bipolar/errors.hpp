#pragma once

#include <stdexcept>
#include <string>

namespace bipolar {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// Pointwise evaluation at a singular point (e.g. 1/R at R = 0).
class SingularityError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// Quadrature, series or moment that failed to converge.
class NumericError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Query that a model kind cannot answer (pointwise value of a delta).
class UnsupportedEvaluation : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

/// Malformed density-spec document or CLI input.
class ParseError : public std::invalid_argument {
public:
  ParseError(const std::string &what, int line = -1)
      : std::invalid_argument(line >= 0 ? "line " + std::to_string(line + 1) +
                                              ": " + what
                                        : what),
        line_(line) {}

  int line() const noexcept { return line_; }

private:
  int line_;
};

} // namespace bipolar
