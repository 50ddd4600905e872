#pragma once

#include <stdexcept>
#include <string>

namespace normsol {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid configuration: dimension, grid size, exponent window, signs.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Array length does not match the grid it is used with.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the mathematical domain of an operation (t <= 0, zero profile, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Root bracketing, iteration or convergence failure.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// The fiber map of a profile does not have an interior local minimum and global maximum.
class NoTwoCriticalPoints : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// A sign change could not be bracketed inside the search window.
class BracketError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// The feasibility inequality on (a, tau) fails, so a solve is refused.
class FeasibilityError : public Error {
 public:
  using Error::Error;
};

}  // namespace normsol
