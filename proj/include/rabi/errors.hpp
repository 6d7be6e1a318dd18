#pragma once

#include <stdexcept>
#include <string>

namespace rabi {

// Base for all numerical failures reported by the library. Argument
// validation failures use std::invalid_argument instead.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Point outside the disk where a non-terminating series converges.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Series hit A(n) = 0 with a nonzero numerator; the solution is non-physical.
class DivergentSolution : public Error {
 public:
  using Error::Error;
};

// Parameters outside what the analytic path supports (g = 0).
class UnsupportedParameter : public Error {
 public:
  using Error::Error;
};

// Energy sits on a pole of a normalization constant.
class PoleError : public Error {
 public:
  using Error::Error;
};

// Fock expansion tail too large for the requested cutoff.
class TruncationError : public Error {
 public:
  using Error::Error;
};

}  // namespace rabi
