#pragma once

#include <Eigen/Dense>

#include <limits>
#include <stdexcept>
#include <string>

namespace exeq {

using Scalar = double;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

inline constexpr Scalar kInfinity = std::numeric_limits<Scalar>::infinity();

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Argument outside the mathematical domain of an operation (e.g. negative time).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A strategy violates the admissibility rules of the active kernel.
class AdmissibilityError : public Error {
 public:
  using Error::Error;
};

/// A numerical procedure failed (singular system, quadrature non-convergence, ...).
class NumericalError : public Error {
 public:
  NumericalError(const std::string& what, Scalar diagnostic = 0.0)
      : Error(what), diagnostic_(diagnostic) {}
  /// Context-dependent value: achieved tolerance, smallest pivot, ...
  Scalar diagnostic() const { return diagnostic_; }

 private:
  Scalar diagnostic_;
};

/// A request is structurally invalid for the given objects (wrong grid, wrong family, ...).
class StructuralError : public Error {
 public:
  using Error::Error;
};

/// Invalid or inconsistent configuration input.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace exeq
