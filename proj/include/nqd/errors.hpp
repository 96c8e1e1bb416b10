#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace nqd {

/// Root of every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Bad user input: invalid parameters, malformed files. The CLI maps these to exit code 2.
class InputError : public Error {
public:
  using Error::Error;
};

/// Numerical failure inside a computation. The CLI maps these to exit code 1.
class NumericalError : public Error {
public:
  using Error::Error;
};

class InvalidArgument : public InputError {
public:
  using InputError::InputError;
};

class UnknownNuclide : public InputError {
public:
  using InputError::InputError;
};

class AmbiguousKey : public InputError {
public:
  using InputError::InputError;
};

class MissingDensity : public InputError {
public:
  using InputError::InputError;
};

class EmptyGrid : public InputError {
public:
  using InputError::InputError;
};

class GeometryMismatch : public InputError {
public:
  using InputError::InputError;
};

class EvalTooCloseToSource : public InputError {
public:
  using InputError::InputError;
};

class ZeroDrive : public InputError {
public:
  using InputError::InputError;
};

class StepTooCoarse : public InputError {
public:
  using InputError::InputError;
};

/// The coherent scattering sum is non-negative, so no bound state exists.
class NoBoundState : public Error {
public:
  NoBoundState(const std::string& what, double sum_re_fm) : Error(what), sum_re_fm_(sum_re_fm) {}
  double sum_re_fm() const { return sum_re_fm_; }

private:
  double sum_re_fm_;
};

/// Absorption vanishes, lifetime is infinite.
class ZeroAbsorption : public Error {
public:
  using Error::Error;
};

class UnboundedImageSet : public InputError {
public:
  using InputError::InputError;
};

class TruncationTooSmall : public NumericalError {
public:
  using NumericalError::NumericalError;
};

class NonConvergedEigensolve : public NumericalError {
public:
  using NumericalError::NumericalError;
};

class CutoffTooSmall : public NumericalError {
public:
  using NumericalError::NumericalError;
};

/// One malformed input row.
struct RowError {
  int row = 0;  // 1-based line number
  std::string message;
};

class SchemaViolation : public InputError {
public:
  SchemaViolation(const std::string& what, std::vector<RowError> rows)
      : InputError(what), rows_(std::move(rows)) {}
  const std::vector<RowError>& rows() const { return rows_; }

private:
  std::vector<RowError> rows_;
};

}  // namespace nqd
