#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace aim {

/// Operand shapes do not agree (vector lengths, matrix/vector, partitions).
class DimensionMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A direction that must be nonzero was (numerically) zero.
class ZeroDirection : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// sᵀy <= 0: the quasi-Newton secant pair carries no positive curvature.
class CurvatureViolation : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// The secant construction produced mᵀy <= 0 or a weight outside (0, 1).
class DegenerateSecant : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A ratio with a vanishing denominator (gᵀHg = 0, x = x_next, ...).
class UndefinedRatio : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Linear system that cannot be factorized as positive definite.
class SingularSystem : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A trace lacks data a check needs (metric, x*, constant step, ...).
class MissingTraceData : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed input text. `line()` is 1-based; 0 means "whole input".
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Invalid experiment or solver configuration.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace aim
