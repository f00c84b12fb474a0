#include "opschur/psd.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace opschur {

double TolerancePolicy::rankCutoff(int dim, double lambdaMax) const {
  const double rel = rankTol > 0.0
                         ? rankTol
                         : static_cast<double>(std::max(dim, 1)) *
                               std::numeric_limits<double>::epsilon() * 64.0;
  return rel * std::max(1.0, lambdaMax);
}

void TolerancePolicy::validate() const {
  for (double v : {psdTol, rankTol, eqTol, limTol}) {
    if (!std::isfinite(v) || v < 0.0) {
      throw std::invalid_argument("TolerancePolicy fields must be finite and nonnegative");
    }
  }
}

HermitianOperator::HermitianOperator(Matrix entries) {
  if (entries.rows() != entries.cols()) {
    throw DimensionMismatch("Hermitian operator requires a square matrix");
  }
  entries_ = 0.5 * (entries + entries.adjoint().eval());
}

HermitianOperator HermitianOperator::identity(int dim) {
  return HermitianOperator(Matrix::Identity(dim, dim));
}

HermitianOperator HermitianOperator::zero(int dim) {
  return HermitianOperator(Matrix::Zero(dim, dim));
}

PsdOperator::PsdOperator(HermitianOperator base, RealVector eigenvalues,
                         Matrix eigenvectors, int rank, double cutoff)
    : base_(std::move(base)),
      eigenvalues_(std::move(eigenvalues)),
      eigenvectors_(std::move(eigenvectors)),
      rank_(rank),
      cutoff_(cutoff) {}

Matrix PsdOperator::rangeBasis() const {
  return eigenvectors_.rightCols(rank_);
}

Matrix PsdOperator::rangeProjector() const {
  const Matrix basis = rangeBasis();
  return basis * basis.adjoint();
}

PsdOperator PsdOperator::scaled(double factor) const {
  if (!(factor >= 0.0)) {
    throw std::invalid_argument("scaling factor must be nonnegative");
  }
  RealVector values = factor * eigenvalues_;
  const int rank = factor > 0.0 ? rank_ : 0;
  return PsdOperator(HermitianOperator(factor * base_.matrix()),
                     std::move(values), eigenvectors_, rank, factor * cutoff_);
}

PsdOperator make_psd(const HermitianOperator& m, const TolerancePolicy& pol) {
  pol.validate();
  const int n = m.dim();
  if (n == 0) {
    return PsdOperator(m, RealVector(0), Matrix(0, 0), 0, pol.rankCutoff(0, 0.0));
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m.matrix());
  if (solver.info() != Eigen::Success) {
    throw Error("eigendecomposition failed");
  }
  RealVector values = solver.eigenvalues();
  const double lambdaMax = values(n - 1);
  const double scale = std::max(1.0, lambdaMax);
  const double floor = -pol.psdTol * scale;
  if (values(0) < floor) {
    std::ostringstream msg;
    msg << "matrix is not positive semidefinite: min eigenvalue " << values(0)
        << " below " << floor;
    throw NotPositive(msg.str());
  }
  for (int i = 0; i < n; ++i) {
    if (values(i) < 0.0) values(i) = 0.0;
  }
  const double cutoff = pol.rankCutoff(n, values(n - 1));
  int rank = 0;
  for (int i = 0; i < n; ++i) {
    if (values(i) > cutoff) ++rank;
  }
  return PsdOperator(m, std::move(values), solver.eigenvectors(), rank, cutoff);
}

PsdOperator make_psd(const Matrix& m, const TolerancePolicy& pol) {
  return make_psd(HermitianOperator(m), pol);
}

HermitianOperator pseudo_inverse(const PsdOperator& a) {
  const int n = a.dim();
  RealVector inverted = RealVector::Zero(n);
  const int first = n - a.numericalRank();
  for (int i = first; i < n; ++i) {
    inverted(i) = 1.0 / a.eigenvalues()(i);
  }
  Matrix result = a.eigenvectors() * inverted.asDiagonal() *
                  a.eigenvectors().adjoint();
  return HermitianOperator(std::move(result));
}

PsdOperator sqrt_psd(const PsdOperator& a) {
  RealVector roots = a.eigenvalues().cwiseSqrt();
  Matrix base = a.eigenvectors() * roots.asDiagonal() * a.eigenvectors().adjoint();
  // sqrt is monotone, so the same eigenvalue indices stay above sqrt(cutoff):
  // the square root has exactly the range of a.
  return PsdOperator(HermitianOperator(std::move(base)), std::move(roots),
                     a.eigenvectors(), a.numericalRank(), std::sqrt(a.rankCutoff()));
}

bool range_inclusion(const Matrix& x, const PsdOperator& a,
                     const TolerancePolicy& pol) {
  if (x.rows() != a.dim()) {
    throw DimensionMismatch("range_inclusion: row dimension must match the operator");
  }
  const Matrix basis = a.rangeBasis();
  const Matrix residual = x - basis * (basis.adjoint() * x);
  return residual.norm() <= pol.eqTol * std::max(1.0, x.norm());
}

bool loewner_leq(const HermitianOperator& a, const HermitianOperator& b,
                 const TolerancePolicy& pol) {
  if (a.dim() != b.dim()) {
    throw DimensionMismatch("loewner_leq: operands must share a dimension");
  }
  if (a.dim() == 0) return true;
  Eigen::SelfAdjointEigenSolver<Matrix> solver(b.matrix() - a.matrix());
  const RealVector& values = solver.eigenvalues();
  const double scale = std::max(1.0, values(values.size() - 1));
  return values(0) >= -pol.psdTol * scale;
}

bool approx_equal(const Matrix& a, const Matrix& b, double tol) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  return (a - b).norm() <= tol * std::max(1.0, std::max(a.norm(), b.norm()));
}

}  // namespace opschur
