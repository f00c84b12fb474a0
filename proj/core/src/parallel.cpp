#include "opschur/parallel.hpp"

#include <algorithm>
#include <optional>

namespace opschur {

PsdOperator parallel_sum(const PsdOperator& a, const PsdOperator& b,
                         const TolerancePolicy& pol) {
  if (a.dim() != b.dim()) {
    throw DimensionMismatch("parallel_sum: operands must share a dimension");
  }
  const PsdOperator sum =
      make_psd(HermitianOperator(a.base().matrix() + b.base().matrix()), pol);
  const IncompleteBlockSystem system(sum, a.base().matrix());
  const PsdOperator shorted = complement(system, pol);
  return make_psd(
      HermitianOperator(a.base().matrix() - shorted.base().matrix()), pol);
}

bool pardiff_exists(const PsdOperator& b, const PsdOperator& a,
                    const TolerancePolicy& pol, std::string* reason) {
  if (a.dim() != b.dim()) {
    throw DimensionMismatch("pardiff_exists: operands must share a dimension");
  }
  std::optional<PsdOperator> residual;
  try {
    residual.emplace(make_psd(
        HermitianOperator(a.base().matrix() - b.base().matrix()), pol));
  } catch (const NotPositive&) {
    if (reason) *reason = "A - B is not positive semidefinite";
    return false;
  }
  if (!range_inclusion(a.base().matrix(), *residual, pol)) {
    if (reason) *reason = "ran A is not contained in ran(A - B)";
    return false;
  }
  if (reason) reason->clear();
  return true;
}

PsdOperator parallel_difference(const PsdOperator& b, const PsdOperator& a,
                                const TolerancePolicy& pol) {
  std::string reason;
  if (!pardiff_exists(b, a, pol, &reason)) {
    throw NotDefined("parallel difference undefined: " + reason);
  }
  const PsdOperator residual = make_psd(
      HermitianOperator(a.base().matrix() - b.base().matrix()), pol);
  const IncompleteBlockSystem system(residual, a.base().matrix());
  const PsdOperator shorted = complement(system, pol);
  return make_psd(
      HermitianOperator(shorted.base().matrix() - a.base().matrix()), pol);
}

PsdOperator weighted_parallel_sum(const PsdOperator& a, const PsdOperator& b,
                                  double weight, const TolerancePolicy& pol) {
  if (!(weight > 0.0)) {
    throw std::invalid_argument("weighted_parallel_sum: weight must be positive");
  }
  if (a.dim() != b.dim()) {
    throw DimensionMismatch("weighted_parallel_sum: operands must share a dimension");
  }
  // Forming A + wB directly loses the small eigenvalues once w is large
  // (the eigensolver error is absolute in ||A + wB||), which starves the
  // Lebesgue iteration of accuracy exactly where it must converge. Instead
  // diagonalize the pair by congruence once, at weight-independent
  // conditioning: on ran(A+B) both operands reduce to diagonal matrices D
  // and I - D, and the weighted parallel sum is a scalar formula in each
  // eigendirection.
  const int n = a.dim();
  const PsdOperator sum =
      make_psd(HermitianOperator(a.base().matrix() + b.base().matrix()), pol);
  const int m = sum.numericalRank();
  if (m == 0) {
    return make_psd(HermitianOperator::zero(n), pol);
  }
  const Matrix range = sum.eigenvectors().rightCols(m);
  const RealVector scale = sum.eigenvalues().tail(m).cwiseSqrt();
  const RealVector invScale = scale.cwiseInverse();

  const Matrix normalized = invScale.asDiagonal() *
                            (range.adjoint() * a.base().matrix() * range) *
                            invScale.asDiagonal();
  Eigen::SelfAdjointEigenSolver<Matrix> solver(
      0.5 * (normalized + normalized.adjoint().eval()));
  if (solver.info() != Eigen::Success) {
    throw Error("eigendecomposition failed");
  }

  RealVector values(m);
  for (int i = 0; i < m; ++i) {
    // In the congruence basis A has weight d and B has weight 1 - d; the
    // parallel sum of the scalars d and w(1 - d) follows directly.
    const double d = std::clamp(solver.eigenvalues()(i), 0.0, 1.0);
    const double denominator = d + weight * (1.0 - d);
    values(i) = denominator > 0.0 ? weight * d * (1.0 - d) / denominator : 0.0;
  }
  const Matrix mid = solver.eigenvectors() * values.asDiagonal() *
                     solver.eigenvectors().adjoint();
  Matrix result = range * (scale.asDiagonal() * mid * scale.asDiagonal()) *
                  range.adjoint();
  return make_psd(HermitianOperator(std::move(result)), pol);
}

}  // namespace opschur
