#include "opschur/kv_extension.hpp"

#include <optional>

namespace opschur {

PartialPositiveOperator::PartialPositiveOperator(int ambientDim,
                                                 Matrix domainBasis,
                                                 Matrix values,
                                                 const TolerancePolicy& pol)
    : ambientDim_(ambientDim),
      domainBasis_(std::move(domainBasis)),
      values_(std::move(values)) {
  if (ambientDim_ < 0) {
    throw DimensionMismatch("ambient dimension must be nonnegative");
  }
  if (domainBasis_.rows() != ambientDim_ || values_.rows() != ambientDim_ ||
      domainBasis_.cols() != values_.cols()) {
    throw DimensionMismatch("domain basis and values must be ambientDim x k");
  }
  const int k = domainDim();
  if (k > 0) {
    Eigen::JacobiSVD<Matrix> svd(domainBasis_);
    const double cutoff =
        pol.rankCutoff(std::max(ambientDim_, k), svd.singularValues()(0));
    int rank = 0;
    for (int i = 0; i < svd.singularValues().size(); ++i) {
      if (svd.singularValues()(i) > cutoff) ++rank;
    }
    if (rank < k) {
      throw std::invalid_argument(
          "domain basis is numerically rank deficient; supply independent columns");
    }
  }
}

bool check_extensibility(const PartialPositiveOperator& p,
                         const TolerancePolicy& pol, std::string* reason) {
  const Matrix gram = p.gram();
  const double gramScale = std::max(1.0, gram.norm());
  if ((gram - gram.adjoint()).norm() > pol.eqTol * gramScale) {
    if (reason) *reason = "gram matrix V*W is not Hermitian";
    return false;
  }
  std::optional<PsdOperator> gramPsd;
  try {
    gramPsd.emplace(make_psd(HermitianOperator(gram), pol));
  } catch (const NotPositive&) {
    if (reason) *reason = "gram matrix V*W is not positive semidefinite";
    return false;
  }
  // Any domain vector that is null for the induced seminorm must be mapped to
  // zero, otherwise no finite constant M_y can exist.
  const Matrix projector = gramPsd->rangeProjector();
  const int k = p.domainDim();
  const Matrix leak =
      p.values() * (Matrix::Identity(k, k) - projector);
  if (leak.norm() > pol.eqTol * std::max(1.0, p.values().norm())) {
    if (reason) *reason = "values do not vanish on the null space of the gram matrix";
    return false;
  }
  if (reason) reason->clear();
  return true;
}

KvExtension krein_von_neumann(const PartialPositiveOperator& p,
                              const TolerancePolicy& pol) {
  std::string reason;
  if (!check_extensibility(p, pol, &reason)) {
    throw NotExtensible("no positive extension exists: " + reason);
  }
  const Matrix gram = p.gram();
  const Matrix gramHerm = 0.5 * (gram + gram.adjoint().eval());
  const PsdOperator gramPsd = make_psd(HermitianOperator(gramHerm), pol);
  const Matrix pinv = pseudo_inverse(gramPsd).matrix();
  Matrix extension = p.values() * pinv * p.values().adjoint();
  return KvExtension{make_psd(HermitianOperator(std::move(extension)), pol),
                     gramHerm, p};
}

}  // namespace opschur
