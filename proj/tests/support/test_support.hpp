#pragma once

#include <random>

#include <Eigen/QR>

#include "opschur/psd.hpp"

namespace opschur::test {

inline Matrix random_gaussian(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) m(i, j) = Complex(gauss(rng), gauss(rng));
  }
  return m;
}

inline Matrix random_unitary(int n, std::mt19937_64& rng) {
  Eigen::HouseholderQR<Matrix> qr(random_gaussian(n, n, rng));
  return qr.householderQ() * Matrix::Identity(n, n);
}

/// Random PSD matrix with the given rank and nonzero eigenvalues drawn from
/// [lo, hi]; keeps instances well conditioned on their range.
inline Matrix random_psd(int n, int rank, std::mt19937_64& rng, double lo = 0.4,
                         double hi = 2.5) {
  std::uniform_real_distribution<double> level(lo, hi);
  const Matrix q = random_unitary(n, rng);
  RealVector values = RealVector::Zero(n);
  for (int i = 0; i < rank; ++i) values(n - 1 - i) = level(rng);
  return q * values.asDiagonal() * q.adjoint();
}

inline Vector random_vec(int n, std::mt19937_64& rng) {
  return random_gaussian(n, 1, rng).col(0);
}

inline Vector random_unit(int n, std::mt19937_64& rng) {
  Vector v = random_vec(n, rng);
  return v / v.norm();
}

inline double quad(const Matrix& m, const Vector& y) {
  return (y.adjoint() * m * y)(0, 0).real();
}

/// Pseudo-inverse through a rank-revealing orthogonal decomposition; an
/// algorithmic path independent of the eigendecomposition-backed kernel.
inline Matrix pinv_cod(const Matrix& m) {
  if (m.size() == 0) return Matrix(m.cols(), m.rows());
  return m.completeOrthogonalDecomposition().pseudoInverse();
}

/// Classical shortcut A (A+B)^+ B for the parallel sum, used only as a
/// cross-check against the complement-based production path.
inline Matrix parallel_sum_classic(const Matrix& a, const Matrix& b) {
  return a * pinv_cod(a + b) * b;
}

/// Shorted operator of a to the range of b via the block generalized Schur
/// complement after rotating ran(b) into the leading coordinates.
inline Matrix shorted_to_range(const Matrix& a, const PsdOperator& b) {
  const int n = static_cast<int>(a.rows());
  const int r = b.numericalRank();
  Matrix q(n, n);
  q.leftCols(r) = b.eigenvectors().rightCols(r);
  q.rightCols(n - r) = b.eigenvectors().leftCols(n - r);
  const Matrix rotated = q.adjoint() * a * q;
  const Matrix a11 = rotated.topLeftCorner(r, r);
  const Matrix a12 = rotated.topRightCorner(r, n - r);
  const Matrix a21 = rotated.bottomLeftCorner(n - r, r);
  const Matrix a22 = rotated.bottomRightCorner(n - r, n - r);
  Matrix shorted = Matrix::Zero(n, n);
  shorted.topLeftCorner(r, r) = a11 - a12 * pinv_cod(a22) * a21;
  return q * shorted * q.adjoint();
}

inline Matrix real2(double a11, double a12, double a21, double a22) {
  Matrix m(2, 2);
  m << a11, a12, a21, a22;
  return m;
}

inline Matrix diag2(double a, double b) {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

}  // namespace opschur::test
