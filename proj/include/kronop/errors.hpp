#pragma once

#include <stdexcept>
#include <string>

namespace kronop {

// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid arguments or malformed configuration (CLI exit code 2).
class ParameterError : public Error {
 public:
  using Error::Error;
};

// Numerical failure: non-convergence, loss of symmetry, breakdown (exit code 3).
class NumericalError : public Error {
 public:
  using Error::Error;
};

// Request exceeds what this build supports: size limits, FP64 underflow (exit code 4).
class CapabilityError : public Error {
 public:
  using Error::Error;
};

}  // namespace kronop
