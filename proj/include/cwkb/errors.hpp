#pragma once

#include <stdexcept>
#include <string>

namespace cwkb {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the domain of an operation (x <= 0, alpha outside (0,1], ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A user-supplied function could not be evaluated or returned a non-finite value.
class EvaluationError : public Error {
 public:
  using Error::Error;
};

/// Quadrature did not reach the requested tolerance.
class AccuracyError : public Error {
 public:
  AccuracyError(const std::string& what, double estimate, double error_bound)
      : Error(what), estimate_(estimate), error_bound_(error_bound) {}

  double estimate() const noexcept { return estimate_; }
  double error_bound() const noexcept { return error_bound_; }

 private:
  double estimate_;
  double error_bound_;
};

/// Interval is not classically allowed where the operation requires it.
class RegionError : public Error {
 public:
  using Error::Error;
};

/// Potential does not have the turning-point structure a solver needs.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// Energy bracket could not be found below the configured ceiling.
class UnboundedSearchError : public Error {
 public:
  using Error::Error;
};

/// Energy lies above the Coulomb barrier; there is nothing to tunnel through.
class NoBarrierError : public Error {
 public:
  using Error::Error;
};

/// Turning radii given in the wrong order.
class OrderingError : public Error {
 public:
  using Error::Error;
};

/// WKB wavefunction requested inside a turning-point neighbourhood.
class SingularityError : public Error {
 public:
  using Error::Error;
};

/// Reference solver grid too coarse to resolve the requested states.
class ResolutionError : public Error {
 public:
  using Error::Error;
};

/// Malformed input file or configuration.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line = 0)
      : Error(line > 0 ? what + " (line " + std::to_string(line) + ")" : what), line_(line) {}

  int line() const noexcept { return line_; }

 private:
  int line_;
};

}  // namespace cwkb
