#ifndef MMVOL_ERRORS_HPP
#define MMVOL_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace mmvol {

// Base class for all failures raised by this library. Callers that map
// failures to process exit codes can catch this single type.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Input outside the mathematical domain of an operation (coordinates out of
// range, matrix not a state, evaluation at a singular boundary point).
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error(what) {}
};

// A state hit a boundary where a weight or metric is undefined, e.g. an
// eigenvalue below the positivity floor while evaluating a volume element.
class SingularStateError : public DomainError {
 public:
  explicit SingularStateError(const std::string& what) : DomainError(what) {}
};

// An integrand returned a non-finite value. Carries the offending point so
// the failure is reproducible.
class IntegrandError : public Error {
 public:
  IntegrandError(const std::string& what, std::vector<double> point)
      : Error(what), point_(std::move(point)) {}
  const std::vector<double>& point() const { return point_; }

 private:
  std::vector<double> point_;
};

// A quadrature routine could not reach the requested tolerance. Carries the
// best estimate achieved so callers can decide whether to accept it.
class AccuracyError : public Error {
 public:
  AccuracyError(const std::string& what, double estimate, double error)
      : Error(what), estimate_(estimate), error_(error) {}
  double estimate() const { return estimate_; }
  double error() const { return error_; }

 private:
  double estimate_;
  double error_;
};

// Internal numerical failure that should not occur for in-range input
// (e.g. a complex root pair from a cubic that must have three real roots).
class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& what) : Error(what) {}
};

}  // namespace mmvol

#endif  // MMVOL_ERRORS_HPP
