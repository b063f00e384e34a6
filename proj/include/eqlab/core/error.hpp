#pragma once

#include <stdexcept>
#include <string>

namespace eqlab {

/// Root of the library's exception hierarchy.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid configuration or parameter set (CLI exit code 2).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Parameter outside the mathematical domain of an operation (e.g. q <= 0 for affine labels).
class DomainError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

/// A numerical procedure failed to deliver a trustworthy answer (CLI exit code 3).
class NumericalError : public Error {
 public:
  using Error::Error;
};

class NoSolutionError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class ConvergenceError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Result fails a structural check (e.g. non-positive-definite metric) at the chosen resolution.
class ResolutionError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Caller broke an operation's precondition (e.g. passed a non-Hermitian Hamiltonian).
class ContractViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace eqlab
