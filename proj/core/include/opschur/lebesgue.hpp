#pragma once

#include "opschur/parallel.hpp"

namespace opschur {

/// Values of the regular part along the three equivalent routes, kept for
/// auditing. The iterative limit is the production value; the other two are
/// recomputed on every call and compared against it.
struct RouteDiagnostics {
  Matrix iterativeLimit;         // lim of A : 2^k B at the stopping index
  Matrix viaParallelDifference;  // (A : B) / B
  Matrix viaComplement;          // (B - B:A)_B - B
  double maxPairwiseDeviation = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// A = regular + singular with regular absolutely continuous and singular
/// mutually singular with respect to the weight operator.
struct LebesgueSplit {
  PsdOperator regular;
  PsdOperator singular;
  RouteDiagnostics routes;
};

/// A is absolutely continuous with respect to B (A << B) when every null
/// direction of B is null for A; at finite dimension this is ran A inside
/// ran B.
bool absolutely_continuous(const PsdOperator& a, const PsdOperator& b,
                           const TolerancePolicy& pol = {});

/// A and B are mutually singular when their ranges intersect trivially,
/// tested through the rank of [sqrt(A) | sqrt(B)].
bool mutually_singular(const PsdOperator& a, const PsdOperator& b,
                       const TolerancePolicy& pol = {});

/// Lebesgue-type decomposition of A with respect to B. The regular part is
/// the limit of A : 2^k B (stop when successive iterates differ by at most
/// limTol * max(1, ||A||_F), hard cap of 60 doublings); the two closed-form
/// routes are evaluated as diagnostics and must agree within 100 * limTol,
/// otherwise RouteDisagreement is thrown.
LebesgueSplit lebesgue_decompose(const PsdOperator& a, const PsdOperator& b,
                                 const TolerancePolicy& pol = {});

/// Decomposition against the identity weight. At finite dimension the
/// identity has full range, so this always returns (A, 0); the operation is
/// kept to expose the degenerate case of the weight-relative API.
LebesgueSplit identity_relative_decompose(const PsdOperator& a,
                                          const TolerancePolicy& pol = {});

}  // namespace opschur
