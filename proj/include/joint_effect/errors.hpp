#pragma once

#include <stdexcept>
#include <string>

namespace joint_effect {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid parameters, malformed input, or a violated precondition.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// The requested numerical tolerance could not be reached.
class AccuracyError : public Error {
 public:
  AccuracyError(const std::string& what, double achieved)
      : Error(what), achieved_(achieved) {}
  double achieved() const noexcept { return achieved_; }

 private:
  double achieved_;
};

/// A rectangle that does not meet the feasible (theta, I2) region.
class EmptyRegionError : public Error {
 public:
  using Error::Error;
};

/// The data are valid but the statistical method cannot be applied to them.
class InapplicableError : public Error {
 public:
  using Error::Error;
};

/// Every observation in both samples is identical.
class DegenerateDataError : public InapplicableError {
 public:
  using InapplicableError::InapplicableError;
};

/// Splitting at the joint median left a part with fewer than two values.
class DegenerateSplitError : public InapplicableError {
 public:
  using InapplicableError::InapplicableError;
};

/// The two samples are perfectly separated.
class SeparationError : public InapplicableError {
 public:
  using InapplicableError::InapplicableError;
};

/// A covariance matrix is singular, has zero variance, or is not PSD.
class SingularCovarianceError : public InapplicableError {
 public:
  using InapplicableError::InapplicableError;
};

}  // namespace joint_effect
