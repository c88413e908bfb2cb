#pragma once

#include <stdexcept>
#include <string>

namespace scalelaw {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input text (curve CSV, manifest, model files).
class ParseError : public Error {
 public:
  using Error::Error;
};

// A value outside its mathematical domain (n <= 0, score outside (0,1), ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// An index or argument outside its admissible range.
class RangeError : public Error {
 public:
  using Error::Error;
};

// Fit could not be set up or carried out (underdetermined, all candidates failed).
class FitError : public Error {
 public:
  using Error::Error;
};

// Non-finite intermediates, non-PSD covariance, stalled solver.
class NumericalError : public Error {
 public:
  using Error::Error;
};

// Dimension mismatch between a model and its input.
class ShapeError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace scalelaw
