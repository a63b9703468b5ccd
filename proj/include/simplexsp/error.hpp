#pragma once

#include <stdexcept>
#include <string>

namespace simplexsp {

/// Input violates a documented precondition or file-format rule.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical routine failed: eigensolver non-convergence, singular sampling set.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace simplexsp
