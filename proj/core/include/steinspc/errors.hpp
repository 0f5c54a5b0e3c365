#pragma once

#include <stdexcept>
#include <string>

namespace steinspc {

/// Base of every error raised by the library.
class Error : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

/// A distribution or weight parameter is outside its domain.
class ParameterError : public Error
{
  public:
    using Error::Error;
};

/// A chart design cannot be realized (e.g. lambda = 1 for AB/ABC charts).
class SpecError : public Error
{
  public:
    using Error::Error;
};

/// A truncated moment sum could not reach the requested tail tolerance.
class TruncationError : public Error
{
  public:
    using Error::Error;
};

/// Monte Carlo estimation produced no usable run lengths.
class EstimationError : public Error
{
  public:
    using Error::Error;
};

/// The calibration bracket does not enclose the target ARL.
class BracketError : public Error
{
  public:
    using Error::Error;
};

/// Calibration hit its iteration cap; carries the best iterate.
class CalibrationError : public Error
{
  public:
    CalibrationError(std::string const& what, double best_limit, double best_arl)
        : Error(what), best_limit_(best_limit), best_arl_(best_arl)
    {
    }
    double best_limit() const noexcept { return best_limit_; }
    double best_arl() const noexcept { return best_arl_; }

  private:
    double best_limit_;
    double best_arl_;
};

/// The data cannot support the requested statistic (all zeros, constant).
class DegenerateDataError : public Error
{
  public:
    using Error::Error;
};

/// Malformed user input (files, records).
class InputError : public Error
{
  public:
    using Error::Error;
};

}  // namespace steinspc
