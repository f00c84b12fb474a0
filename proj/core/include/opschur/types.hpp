#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace opschur {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Base class of all domain errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// A matrix offered as positive has an eigenvalue below the acceptance band.
class NotPositive : public Error {
 public:
  using Error::Error;
};

/// The incomplete system [[A, B*], [B, *]] admits no positive completion.
class NotCompletable : public Error {
 public:
  using Error::Error;
};

/// A fully specified block [[A, B*], [B, C]] fails the positivity check.
class BlockNotPositive : public Error {
 public:
  using Error::Error;
};

/// A partially specified positive operator has no positive extension.
class NotExtensible : public Error {
 public:
  using Error::Error;
};

/// The requested operation (e.g. a parallel difference) does not exist for
/// the given operands.
class NotDefined : public Error {
 public:
  using Error::Error;
};

class NotRepresentable : public Error {
 public:
  using Error::Error;
};

/// The dominance condition |g(a)|^2 <= C f(a*a) fails, so the functional
/// complement is refused.
class NotDominated : public Error {
 public:
  using Error::Error;
};

/// Independent computation routes that must agree disagreed beyond tolerance;
/// indicates a kernel defect rather than a property of the input.
class RouteDisagreement : public Error {
 public:
  using Error::Error;
};

/// Malformed input documents (JSON schema violations, non-finite numbers).
class FormatError : public Error {
 public:
  using Error::Error;
};

/// Numerical cutoffs used by every kernel. All values are relative: they are
/// multiplied by max(1, scale) of the quantity under test.
struct TolerancePolicy {
  double psdTol = 1e-9;  // acceptance band for negative eigenvalues
  double rankTol = 0.0;  // rank cutoff; 0 selects the dimension-scaled default
  double eqTol = 1e-8;   // matrix and vector equality
  double limTol = 1e-9;  // convergence of operator sequences

  /// Absolute eigenvalue threshold below which a direction counts as null.
  /// The default (rankTol == 0) scales with dimension: dim * eps * 64.
  double rankCutoff(int dim, double lambdaMax) const;

  void validate() const;  // throws std::invalid_argument
};

}  // namespace opschur
