#pragma once

#include <stdexcept>
#include <string>

namespace shiftk {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: wrong lengths, out-of-range parameters, non-finite data.
class ValidationError : public Error {
public:
  using Error::Error;
};

/// Numerical failures. The CLI maps these to exit code 3.
class NumericError : public Error {
public:
  using Error::Error;
};

/// A pole on or outside the unit circle.
class StabilityError : public NumericError {
public:
  using NumericError::NumericError;
};

/// Coincident poles, or a pole colliding with rho.
class DegenerateError : public NumericError {
public:
  using NumericError::NumericError;
};

/// A closed form that divides by (a_s - rho) or a_s hit a near-zero divisor.
/// Callers should fall back to loss_freq_quadrature.
class SingularConfigurationError : public NumericError {
public:
  using NumericError::NumericError;
};

class ConditioningError : public NumericError {
public:
  ConditioningError(const std::string& what, double estimate)
      : NumericError(what), condition_estimate(estimate) {}
  double condition_estimate;
};

/// Argument outside the domain where an asymptotic formula is defined.
class DomainError : public NumericError {
public:
  using NumericError::NumericError;
};

class DivergenceError : public NumericError {
public:
  DivergenceError(const std::string& what, int at_epoch)
      : NumericError(what), epoch(at_epoch) {}
  int epoch;
};

}  // namespace shiftk
