#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace semiembed {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operand shapes do not fit the operation (non-square input, wrong order).
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Matrix is numerically singular at the configured rank tolerance.
class SingularMatrixError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the mathematical domain of the operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Input has entries below -positivity_tol where a positive matrix is required.
class NotPositiveError : public Error {
 public:
  using Error::Error;
};

/// A construction was requested for an input its decision procedure rejects.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Closed-form construction has no nonnegative solution.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

/// A constructed object failed its own residual check.
class VerificationError : public Error {
 public:
  using Error::Error;
};

/// Jordan structure could not be resolved reliably; carries the offending cluster.
class StructureAmbiguousError : public Error {
 public:
  StructureAmbiguousError(const std::string& what, std::complex<double> cluster)
      : Error(what), cluster_(cluster) {}

  std::complex<double> cluster() const noexcept { return cluster_; }

 private:
  std::complex<double> cluster_;
};

}  // namespace semiembed
