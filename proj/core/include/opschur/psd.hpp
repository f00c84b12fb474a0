#pragma once

#include "opschur/types.hpp"

namespace opschur {

/// An n x n complex Hermitian matrix. Construction symmetrizes the input,
/// m <- (m + m*)/2, so file-sourced matrices with round-off asymmetry are
/// accepted. Real symmetric input is treated as complex with zero imaginary
/// parts. Immutable after construction.
class HermitianOperator {
 public:
  explicit HermitianOperator(Matrix entries);

  static HermitianOperator identity(int dim);
  static HermitianOperator zero(int dim);

  int dim() const { return static_cast<int>(entries_.rows()); }
  const Matrix& matrix() const { return entries_; }

 private:
  Matrix entries_;
};

/// A positive semidefinite operator carrying its spectral decomposition.
/// Eigenvalues are ascending; values inside [-psdTol*scale, 0) are clamped to
/// zero. The numerical rank counts eigenvalues above the rank cutoff, and the
/// same cutoff drives the pseudo-inverse and the range projector so that all
/// range decisions downstream stay consistent.
class PsdOperator {
 public:
  const HermitianOperator& base() const { return base_; }
  const RealVector& eigenvalues() const { return eigenvalues_; }
  const Matrix& eigenvectors() const { return eigenvectors_; }
  int numericalRank() const { return rank_; }
  int dim() const { return base_.dim(); }
  double rankCutoff() const { return cutoff_; }

  /// Columns spanning the numerical range (eigenvectors above the cutoff).
  Matrix rangeBasis() const;
  /// Orthogonal projector onto the numerical range.
  Matrix rangeProjector() const;

  /// The operator scaled by factor >= 0; reuses the eigensystem, so the
  /// retained range is preserved for factor > 0.
  PsdOperator scaled(double factor) const;

  friend PsdOperator make_psd(const HermitianOperator& m,
                              const TolerancePolicy& pol);
  friend PsdOperator sqrt_psd(const PsdOperator& a);

 private:
  PsdOperator(HermitianOperator base, RealVector eigenvalues,
              Matrix eigenvectors, int rank, double cutoff);

  HermitianOperator base_;
  RealVector eigenvalues_;
  Matrix eigenvectors_;
  int rank_;
  double cutoff_;
};

/// Decomposes a Hermitian matrix as a positive operator. Eigenvalues within
/// [-psdTol*max(1, lambda_max), 0) are clamped to zero; anything lower throws
/// NotPositive.
PsdOperator make_psd(const HermitianOperator& m, const TolerancePolicy& pol = {});
PsdOperator make_psd(const Matrix& m, const TolerancePolicy& pol = {});

/// Moore-Penrose pseudo-inverse through the stored eigensystem. Satisfies the
/// four Penrose identities within eqTol.
HermitianOperator pseudo_inverse(const PsdOperator& a);

/// Positive square root; sqrt_psd(a) * sqrt_psd(a) == a.base() within eqTol.
PsdOperator sqrt_psd(const PsdOperator& a);

/// True iff ran(x) is contained in the numerical range of a, i.e.
/// ||(I - P_ran(a)) x|| <= eqTol * max(1, ||x||). x may be a vector or a
/// matrix with a.dim() rows.
bool range_inclusion(const Matrix& x, const PsdOperator& a,
                     const TolerancePolicy& pol = {});

/// Loewner order: true iff b - a is positive semidefinite within psdTol.
bool loewner_leq(const HermitianOperator& a, const HermitianOperator& b,
                 const TolerancePolicy& pol = {});

/// Frobenius-norm comparison with a relative tolerance.
bool approx_equal(const Matrix& a, const Matrix& b, double tol);

}  // namespace opschur
