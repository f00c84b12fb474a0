#pragma once

#include <string>

#include "opschur/psd.hpp"

namespace opschur {

/// A positive operator specified only on a subspace of C^n: a basis V of the
/// domain (n x k, full column rank) and the values W = A V on that basis.
/// Redundant spanning sets are rejected so that the null space of the Gram
/// matrix V* W encodes genuinely null directions of the induced seminorm.
class PartialPositiveOperator {
 public:
  PartialPositiveOperator(int ambientDim, Matrix domainBasis, Matrix values,
                          const TolerancePolicy& pol = {});

  int ambientDim() const { return ambientDim_; }
  int domainDim() const { return static_cast<int>(domainBasis_.cols()); }
  const Matrix& domainBasis() const { return domainBasis_; }
  const Matrix& values() const { return values_; }

  /// Gram matrix V* W of the domain vectors in the induced inner product.
  Matrix gram() const { return domainBasis_.adjoint() * values_; }

 private:
  int ambientDim_;
  Matrix domainBasis_;
  Matrix values_;
};

/// The smallest everywhere-defined positive extension together with the Gram
/// matrix of the auxiliary inner-product space it is built from.
struct KvExtension {
  PsdOperator extension;
  Matrix gram;
  PartialPositiveOperator domain;
};

/// Decides whether a positive extension exists: the Gram matrix must be
/// Hermitian positive semidefinite and every domain vector with vanishing
/// seminorm must be annihilated by the values, W (I - P_ran(G)) = 0.
/// Never throws; on failure an explanation is written to *reason.
bool check_extensibility(const PartialPositiveOperator& p,
                         const TolerancePolicy& pol = {},
                         std::string* reason = nullptr);

/// Smallest positive extension, W (V* W)^+ W*. Throws NotExtensible when
/// check_extensibility fails.
KvExtension krein_von_neumann(const PartialPositiveOperator& p,
                              const TolerancePolicy& pol = {});

}  // namespace opschur
