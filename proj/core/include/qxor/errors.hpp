#pragma once

#include <stdexcept>
#include <string>

namespace qxor {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

// Raised when a constructed object violates one of its invariants by more
// than the allowed tolerance.
class ValidationError : public Error {
 public:
  ValidationError(std::string invariant, const std::string& detail)
      : Error(invariant + ": " + detail), invariant_(std::move(invariant)) {}
  const std::string& invariant() const noexcept { return invariant_; }

 private:
  std::string invariant_;
};

class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double residual)
      : Error(what + " (residual " + std::to_string(residual) + ")"), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

class ParseError : public Error {
 public:
  ParseError(std::string field, const std::string& detail)
      : Error("field '" + field + "': " + detail), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

// A certified lower bound exceeded a certified upper bound. Only a bug can
// cause this.
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

}  // namespace qxor
