#pragma once

#include <stdexcept>
#include <string>

namespace cvrl {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Cutoff, mode count or operator shapes are inconsistent.
class InvalidDimension : public Error {
 public:
  using Error::Error;
};

/// A matrix failed the density-operator checks (PSD, trace, Hermiticity).
class InvalidState : public Error {
 public:
  using Error::Error;
};

/// Out-of-range scalar argument (negative epsilon, |q| > 1, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Requested operator exceeds the configured memory budget.
class ResourceError : public Error {
 public:
  using Error::Error;
};

/// Truncation would drop more probability than the configured guard allows.
class CutoffTooSmall : public Error {
 public:
  using Error::Error;
};

/// Covariance matrix violates V + iΩ >= 0.
class BonaFideViolation : public Error {
 public:
  using Error::Error;
};

/// rho has weight outside the numerical support of sigma.
class SupportError : public Error {
 public:
  using Error::Error;
};

/// Every multistart branch evaluated to +inf.
class NoFeasibleSigma : public Error {
 public:
  using Error::Error;
};

/// The state cannot be separated from the Gaussian set at this cutoff.
class IndistinguishableFromGaussian : public Error {
 public:
  using Error::Error;
};

/// A witness took a negative value on a Gaussian state; carries the violating parameters.
class WitnessViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace cvrl
