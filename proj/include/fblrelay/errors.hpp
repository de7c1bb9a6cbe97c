#pragma once

#include <stdexcept>
#include <string>

namespace fblrelay {

/// Argument outside the mathematical domain of an operation (e.g. eps ∉ (0,1)).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Invalid configuration. Carries the offending field name so front ends can report it.
class ValidationError : public std::invalid_argument {
 public:
  ValidationError(std::string field, const std::string& what)
      : std::invalid_argument(field + ": " + what), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// Adaptive quadrature or an iterative solver ran out of its evaluation budget.
class NonConvergence : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace fblrelay
