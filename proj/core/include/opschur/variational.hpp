#pragma once

#include <cstdint>

#include "opschur/types.hpp"

namespace opschur {

/// Which quadratic-form formula to evaluate. Operand meaning per objective:
///   ComplementBounded / ComplementShifted:
///     first = A (n1 x n1), second = B (n2 x n1), y on the lower space;
///     bounded form sup{ |<Bx,y>|^2 : <Ax,x> <= 1 },
///     shifted form sup{ <Bx,y> + <B*y,x> - <Ax,x> }.
///   ComplementSelfAdjoint: both operands positive on one space;
///     sup{ <By,x> + <Bx,y> - <Ax,x> } with first = A, second = B.
///   ParallelDifference: first = B, second = A;
///     sup{ <B(x+y),x+y> - <Ax,x> }.
///   KvExtensionBounded / KvExtensionShifted:
///     first = domain basis V (n x k), second = values W (n x k);
///     the supremum runs over the domain, parameterized by coordinates.
enum class SupObjective {
  ComplementBounded,
  ComplementShifted,
  ComplementSelfAdjoint,
  ParallelDifference,
  KvExtensionBounded,
  KvExtensionShifted,
};

/// Estimate of a variational value. For sup-type objectives the value is a
/// certified lower bound achieved by the witness; for inf-type a certified
/// upper bound. unbounded marks a detected direction of infinite growth (the
/// witness then holds that direction).
struct OracleEstimate {
  double value = 0.0;
  bool unbounded = false;
  Vector witness;
  int iterations = 0;
  bool converged = false;
};

/// Multi-start exact-line-search ascent on the chosen objective. Works purely
/// through matrix-vector products; never forms a pseudo-inverse of the
/// operands, so it is independent of the closed-form kernels it checks.
OracleEstimate oracle_sup(SupObjective objective, const Matrix& first,
                          const Matrix& second, const Vector& y,
                          int budget = 200, const TolerancePolicy& pol = {},
                          std::uint64_t seed = 0x9e3779b97f4a7c15ULL);

/// inf{ <A(y+x), y+x> + <Bx, x> } over x, the parallel-sum form; always
/// finite for positive operands.
OracleEstimate oracle_inf(const Matrix& a, const Matrix& b, const Vector& y,
                          int budget = 200, const TolerancePolicy& pol = {},
                          std::uint64_t seed = 0x9e3779b97f4a7c15ULL);

}  // namespace opschur
