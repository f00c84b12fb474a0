#pragma once

#include <string>

#include "opschur/completion.hpp"

namespace opschur {

/// Parallel sum A : B = A - (A+B)_A, computed through the completion of the
/// system [[A+B, A], [A, *]], which is always positive.
PsdOperator parallel_sum(const PsdOperator& a, const PsdOperator& b,
                         const TolerancePolicy& pol = {});

/// Existence test for the parallel difference b / a: A - B must be positive
/// and ran A must lie inside ran(A - B). The two failure modes are reported
/// distinctly through *reason.
bool pardiff_exists(const PsdOperator& b, const PsdOperator& a,
                    const TolerancePolicy& pol = {},
                    std::string* reason = nullptr);

/// Parallel difference B / A = (A-B)_A - A. Throws NotDefined when
/// pardiff_exists fails (e.g. for A == B != 0 the defining supremum is
/// infinite).
PsdOperator parallel_difference(const PsdOperator& b, const PsdOperator& a,
                                const TolerancePolicy& pol = {});

/// A : (weight * B) for weight > 0; the iterates whose limit is the regular
/// part of the Lebesgue decomposition.
PsdOperator weighted_parallel_sum(const PsdOperator& a, const PsdOperator& b,
                                  double weight,
                                  const TolerancePolicy& pol = {});

}  // namespace opschur
