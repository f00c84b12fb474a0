#include "opschur/completion.hpp"

namespace opschur {

IncompleteBlockSystem::IncompleteBlockSystem(PsdOperator a, Matrix b)
    : a_(std::move(a)), b_(std::move(b)) {
  if (b_.cols() != a_.dim()) {
    throw DimensionMismatch("block system: B must have as many columns as A");
  }
}

bool is_completable(const IncompleteBlockSystem& s, const TolerancePolicy& pol) {
  return range_inclusion(s.b().adjoint(), s.a(), pol);
}

PsdOperator complement(const IncompleteBlockSystem& s, const TolerancePolicy& pol) {
  if (!is_completable(s, pol)) {
    throw NotCompletable("ran B* is not contained in ran A");
  }
  const Matrix pinv = pseudo_inverse(s.a()).matrix();
  Matrix result = s.b() * pinv * s.b().adjoint();
  return make_psd(HermitianOperator(std::move(result)), pol);
}

HermitianOperator schur_complement(const IncompleteBlockSystem& s,
                                   const PsdOperator& c,
                                   const TolerancePolicy& pol) {
  if (c.dim() != s.lowerDim()) {
    throw DimensionMismatch("schur_complement: C must act on the lower space");
  }
  const PsdOperator minimal = complement(s, pol);
  if (!check_block_psd(s.a().base(), s.b(), c.base(), pol)) {
    throw BlockNotPositive("[[A, B*], [B, C]] is not positive semidefinite");
  }
  return HermitianOperator(c.base().matrix() - minimal.base().matrix());
}

HermitianOperator assemble_block(const HermitianOperator& a, const Matrix& b,
                                 const HermitianOperator& c) {
  if (b.cols() != a.dim() || b.rows() != c.dim()) {
    throw DimensionMismatch("assemble_block: incompatible block dimensions");
  }
  const int n1 = a.dim();
  const int n2 = c.dim();
  Matrix block(n1 + n2, n1 + n2);
  block.topLeftCorner(n1, n1) = a.matrix();
  block.topRightCorner(n1, n2) = b.adjoint();
  block.bottomLeftCorner(n2, n1) = b;
  block.bottomRightCorner(n2, n2) = c.matrix();
  return HermitianOperator(std::move(block));
}

bool check_block_psd(const HermitianOperator& a, const Matrix& b,
                     const HermitianOperator& c, const TolerancePolicy& pol) {
  const HermitianOperator block = assemble_block(a, b, c);
  try {
    make_psd(block, pol);
    return true;
  } catch (const NotPositive&) {
    return false;
  }
}

CompletionReport analyze_completion(const IncompleteBlockSystem& s,
                                    const std::vector<Vector>& probes,
                                    const TolerancePolicy& pol) {
  CompletionReport report;
  report.completable = is_completable(s, pol);
  if (!report.completable) {
    report.reason = "ran B* is not contained in ran A";
    return report;
  }
  report.complement = complement(s, pol);
  const Matrix& ab = report.complement->base().matrix();
  report.bestConstants.reserve(probes.size());
  for (const Vector& y : probes) {
    if (y.size() != s.lowerDim()) {
      throw DimensionMismatch("probe vector must live on the lower space");
    }
    report.bestConstants.push_back({y, (y.adjoint() * ab * y)(0, 0).real()});
  }
  return report;
}

}  // namespace opschur
