#pragma once

#include <stdexcept>
#include <string>

namespace w2b {

// Invalid input, configuration or precondition violation.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A well-formed request that cannot be evaluated numerically
// (zero mass after scaling, exp overflow, CFL violation, non-PD covariance).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace w2b
