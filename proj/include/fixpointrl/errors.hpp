#pragma once

#include <stdexcept>
#include <string>

namespace fixpointrl {

/// Violated precondition on numerical input (shape, hermiticity, normalization).
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Out-of-range basis or pair index.
class IndexError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Invalid model parameter (qubit count, sector weight, ...).
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Invalid agent or experiment configuration.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Rescaling requested for a spectrum with no width.
class DegenerateSpectrumError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A Hamiltonian couples different Hamming-weight sectors.
class SymmetryViolationError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace fixpointrl
