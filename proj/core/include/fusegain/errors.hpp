#pragma once

#include <stdexcept>
#include <string>

namespace fusegain {

// Base of the library's exception hierarchy. The three direct branches map
// onto the CLI exit-code contract: validation -> 2, numerical -> 3,
// unsupported structure -> 4.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

class NumericalError : public Error {
 public:
  using Error::Error;
};

class UnsupportedError : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class NotPositiveDefinite : public ValidationError {
 public:
  explicit NotPositiveDefinite(const std::string& field)
      : ValidationError("matrix is not positive definite: " + field),
        field_(field) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

class JointCovarianceInvalid : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class ShapeMismatch : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class LengthMismatch : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class InvalidInput : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class SingularMatrix : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class SingularConditionalCovariance : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class NumericalFailure : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// Thrown by the analytic designer when every subchannel has zero signal
// variance, i.e. the secondary channel cannot add information.
class NoInformativeChannel : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class ZeroIterate : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class UnsupportedStructure : public UnsupportedError {
 public:
  using UnsupportedError::UnsupportedError;
};

class UnsupportedNoise : public UnsupportedError {
 public:
  using UnsupportedError::UnsupportedError;
};

}  // namespace fusegain
