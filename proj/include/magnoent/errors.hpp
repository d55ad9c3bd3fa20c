#ifndef MAGNOENT_ERRORS_HPP
#define MAGNOENT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace magnoent {

// Base of every error thrown by the library. The CLI maps ConfigError to exit
// code 2 and every other Error to exit code 3.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidParameter : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class NumericalError : public Error {
public:
    using Error::Error;
};

class ConvergenceError : public NumericalError {
public:
    ConvergenceError(const std::string& what, double residual, int iterations)
      : NumericalError(what), residual_(residual), iterations_(iterations)
    {
    }
    double residual() const { return residual_; }
    int iterations() const { return iterations_; }

private:
    double residual_;
    int iterations_;
};

// Damped iteration settled into a two-cycle; the Kerr map may have several
// fixed points at this drive.
class BistabilityError : public ConvergenceError {
public:
    using ConvergenceError::ConvergenceError;
};

class StabilityError : public NumericalError {
public:
    StabilityError(const std::string& what, double margin)
      : NumericalError(what), margin_(margin)
    {
    }
    double margin() const { return margin_; }

private:
    double margin_;
};

class AccuracyError : public NumericalError {
public:
    AccuracyError(const std::string& what, double residual)
      : NumericalError(what), residual_(residual)
    {
    }
    double residual() const { return residual_; }

private:
    double residual_;
};

class PhysicalityError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class BracketError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

// An unstable point was met while bisecting; carries the offending axis value.
class ThresholdInstability : public NumericalError {
public:
    ThresholdInstability(const std::string& what, double point)
      : NumericalError(what), point_(point)
    {
    }
    double point() const { return point_; }

private:
    double point_;
};

} // namespace magnoent

#endif
