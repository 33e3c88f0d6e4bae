#pragma once

#include <stdexcept>
#include <string>

namespace qcarm {

/// Input outside the mathematical domain of an operation (m < 2, gcd(0,0), ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A pipeline precondition that the caller violated (e.g. a prime passed to certify).
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Requested size exceeds a configured bound (factorization range, amplitude cap, ...).
class CapacityError : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// Norm drifted outside tolerance after a supposedly unitary step.
class NormalizationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Post-selection on an outcome with (numerically) zero probability.
class ZeroProbabilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qcarm
