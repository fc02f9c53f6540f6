#pragma once

#include <stdexcept>
#include <string>

namespace fractrace {

/// Argument outside the admissible parameter region of a formula or operator.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Input that makes a quotient or residual meaningless (zero norm, empty field).
class DegenerateInputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical procedure failed to converge or produced a non-finite value.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace fractrace
