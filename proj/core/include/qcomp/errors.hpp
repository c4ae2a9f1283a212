#pragma once

#include <stdexcept>
#include <string>

namespace qcomp {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input validation failures. The CLI maps these to exit code 2.
class ValidationError : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class NotHermitian : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class NotCompletelyPositive : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class NotAChannel : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class ZeroMap : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class ShapeError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class LabelMismatch : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class LabelUnknown : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class SizeMismatch : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class NotSpanning : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class NotComplete : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class DegeneratePayoff : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// The SDP solver did not return a certified optimum. The CLI maps these
/// to exit code 3.
class SolverFailure : public Error {
 public:
  using Error::Error;
};

/// Factorization breakdown inside the interior-point iteration.
class NumericalFailure : public SolverFailure {
 public:
  using SolverFailure::SolverFailure;
};

}  // namespace qcomp
