#pragma once

#include <stdexcept>
#include <string>

namespace ipcw {

//! Base class for all library errors.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

//! Invalid configuration or arguments (CLI exit code 2).
class ConfigError : public Error {
public:
  using Error::Error;
};

//! File and parsing problems (CLI exit code 3).
class IoError : public Error {
public:
  using Error::Error;
};

//! Numeric/degenerate conditions (CLI exit code 4).
class NumericError : public Error {
public:
  using Error::Error;
};

//! No covariate within h * support_radius of the evaluation point:
//! the Nadaraya-Watson denominator vanishes. Signals bandwidth too
//! small locally; grid evaluators report such points as missing.
class EmptyWindowError : public NumericError {
public:
  using NumericError::NumericError;
};

//! Conditional CDF too close to 1 for the hazard ratio.
class DegenerateDenominatorError : public NumericError {
public:
  using NumericError::NumericError;
};

//! Design-density plug-in is nonpositive at the evaluation point.
class ZeroDensityError : public NumericError {
public:
  using NumericError::NumericError;
};

}  // namespace ipcw
