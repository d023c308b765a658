#pragma once

#include <stdexcept>
#include <string>

namespace suita {

// Bad input: malformed files, invariant violations, precondition failures.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// The input was well-formed but the computation could not be carried out
// reliably (ill-conditioned system, evaluation too close to a boundary, ...).
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace suita
