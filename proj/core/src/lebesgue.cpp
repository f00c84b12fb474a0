#include "opschur/lebesgue.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace opschur {

bool absolutely_continuous(const PsdOperator& a, const PsdOperator& b,
                           const TolerancePolicy& pol) {
  if (a.dim() != b.dim()) {
    throw DimensionMismatch("absolutely_continuous: operands must share a dimension");
  }
  return range_inclusion(a.base().matrix(), b, pol);
}

bool mutually_singular(const PsdOperator& a, const PsdOperator& b,
                       const TolerancePolicy& pol) {
  if (a.dim() != b.dim()) {
    throw DimensionMismatch("mutually_singular: operands must share a dimension");
  }
  const int n = a.dim();
  Matrix stacked(n, 2 * n);
  stacked.leftCols(n) = sqrt_psd(a).base().matrix();
  stacked.rightCols(n) = sqrt_psd(b).base().matrix();
  Eigen::JacobiSVD<Matrix> svd(stacked);
  const auto& sigma = svd.singularValues();
  // Squared singular values of [sqrt(A) | sqrt(B)] are the eigenvalues of
  // A + B; use the same relative rank rule as make_psd on that scale.
  const double sigmaMax = sigma.size() > 0 ? sigma(0) : 0.0;
  const double cutoff = std::sqrt(pol.rankCutoff(n, sigmaMax * sigmaMax));
  int jointRank = 0;
  for (int i = 0; i < sigma.size(); ++i) {
    if (sigma(i) > cutoff) ++jointRank;
  }
  return jointRank == a.numericalRank() + b.numericalRank();
}

namespace {

struct IterativeLimit {
  Matrix value;
  int iterations = 0;
  bool converged = false;
};

IterativeLimit regular_part_iterative(const PsdOperator& a,
                                      const PsdOperator& b,
                                      const TolerancePolicy& pol) {
  constexpr int kMaxDoublings = 60;
  // Stop a factor below limTol so the remaining truncation stays clear of
  // the denoising floor applied to the singular part.
  const double stopNorm =
      0.25 * pol.limTol * std::max(1.0, a.base().matrix().norm());
  IterativeLimit out;
  Matrix previous = parallel_sum(a, b, pol).base().matrix();
  double weight = 1.0;
  for (int k = 1; k <= kMaxDoublings; ++k) {
    weight *= 2.0;
    Matrix current = weighted_parallel_sum(a, b, weight, pol).base().matrix();
    const double step = (current - previous).norm();
    previous = std::move(current);
    if (step <= stopNorm) {
      out.value = std::move(previous);
      out.iterations = k;
      out.converged = true;
      return out;
    }
  }
  out.value = std::move(previous);
  out.iterations = kMaxDoublings;
  return out;
}

/// Rebuilds a Hermitian matrix as a positive operator with eigenvalues at or
/// below the floor snapped to zero. The iterates approach the regular part
/// from below, so the singular part carries one-sided dust of the size of
/// the stopping tolerance; snapping it keeps numerical rank decisions exact.
PsdOperator truncated_psd(const Matrix& m, double floor,
                          const TolerancePolicy& pol) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (m + m.adjoint().eval()));
  RealVector values = solver.eigenvalues();
  for (int i = 0; i < values.size(); ++i) {
    if (values(i) <= floor) values(i) = 0.0;
  }
  Matrix rebuilt = solver.eigenvectors() * values.asDiagonal() *
                   solver.eigenvectors().adjoint();
  return make_psd(HermitianOperator(std::move(rebuilt)), pol);
}

}  // namespace

LebesgueSplit lebesgue_decompose(const PsdOperator& a, const PsdOperator& b,
                                 const TolerancePolicy& pol) {
  if (a.dim() != b.dim()) {
    throw DimensionMismatch("lebesgue_decompose: operands must share a dimension");
  }

  RouteDiagnostics routes;
  IterativeLimit limit = regular_part_iterative(a, b, pol);
  routes.iterativeLimit = std::move(limit.value);
  routes.iterations = limit.iterations;
  routes.converged = limit.converged;

  const PsdOperator ab = parallel_sum(a, b, pol);
  routes.viaParallelDifference =
      parallel_difference(ab, b, pol).base().matrix();

  const PsdOperator ba = parallel_sum(b, a, pol);
  const PsdOperator shortfall = make_psd(
      HermitianOperator(b.base().matrix() - ba.base().matrix()), pol);
  const IncompleteBlockSystem system(shortfall, b.base().matrix());
  routes.viaComplement =
      complement(system, pol).base().matrix() - b.base().matrix();

  const double d12 = (routes.iterativeLimit - routes.viaParallelDifference).norm();
  const double d13 = (routes.iterativeLimit - routes.viaComplement).norm();
  const double d23 = (routes.viaParallelDifference - routes.viaComplement).norm();
  routes.maxPairwiseDeviation = std::max({d12, d13, d23});

  const double allowed = 100.0 * pol.limTol * std::max(1.0, a.base().matrix().norm());
  if (routes.maxPairwiseDeviation > allowed) {
    std::ostringstream msg;
    msg << "regular-part routes disagree by " << routes.maxPairwiseDeviation
        << " (allowed " << allowed << ")";
    throw RouteDisagreement(msg.str());
  }

  PsdOperator regular = make_psd(HermitianOperator(routes.iterativeLimit), pol);
  const double floor = pol.limTol * std::max(1.0, a.base().matrix().norm());
  PsdOperator singular =
      truncated_psd(a.base().matrix() - regular.base().matrix(), floor, pol);
  return LebesgueSplit{std::move(regular), std::move(singular), std::move(routes)};
}

LebesgueSplit identity_relative_decompose(const PsdOperator& a,
                                          const TolerancePolicy& pol) {
  const PsdOperator identity =
      make_psd(HermitianOperator::identity(a.dim()), pol);
  return lebesgue_decompose(a, identity, pol);
}

}  // namespace opschur
