#pragma once

#include <stdexcept>
#include <string>

namespace hostembed {

// Base class for every error raised by the library. The CLI maps the
// subclasses onto exit codes (validation 2, infeasible 3, numeric/search 4).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

// P < 2^{2R} - 1: no scheme communicates reliably at this rate.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

class UnsupportedVariantError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// An objective produced NaN or a formula hit a degenerate denominator.
class NumericDomainError : public Error {
 public:
  NumericDomainError(const std::string& what, double argument)
      : Error(what + " (at " + std::to_string(argument) + ")"), argument_(argument) {}
  explicit NumericDomainError(const std::string& what) : Error(what) {}

  double argument() const noexcept { return argument_; }

 private:
  double argument_ = 0.0;
};

class SearchError : public Error {
 public:
  using Error::Error;
};

class ResourceError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace hostembed
