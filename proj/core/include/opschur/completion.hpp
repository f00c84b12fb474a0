#pragma once

#include <optional>
#include <string>
#include <vector>

#include "opschur/psd.hpp"

namespace opschur {

/// The incomplete block system [[A, B*], [B, *]] with A positive on the upper
/// space and B mapping the upper space into the lower one. The two spaces may
/// have different dimensions.
class IncompleteBlockSystem {
 public:
  IncompleteBlockSystem(PsdOperator a, Matrix b);

  const PsdOperator& a() const { return a_; }
  const Matrix& b() const { return b_; }
  int upperDim() const { return a_.dim(); }
  int lowerDim() const { return static_cast<int>(b_.rows()); }

 private:
  PsdOperator a_;
  Matrix b_;
};

struct ProbeConstant {
  Vector probe;
  double value;  // the smallest admissible M_y for this probe vector
};

struct CompletionReport {
  bool completable = false;
  std::optional<PsdOperator> complement;
  std::vector<ProbeConstant> bestConstants;
  std::string reason;
};

/// Condition (iii): ran B* must lie inside the range of A. Equivalent to the
/// existence of per-vector constants and of a positive completion.
bool is_completable(const IncompleteBlockSystem& s,
                    const TolerancePolicy& pol = {});

/// The smallest positive C making [[A, B*], [B, C]] positive: B A^+ B*.
/// Throws NotCompletable when the range condition fails.
PsdOperator complement(const IncompleteBlockSystem& s,
                       const TolerancePolicy& pol = {});

/// C minus the minimal completion; positive whenever [[A, B*], [B, C]] is.
/// Throws NotCompletable or BlockNotPositive.
HermitianOperator schur_complement(const IncompleteBlockSystem& s,
                                   const PsdOperator& c,
                                   const TolerancePolicy& pol = {});

/// Assembles [[a, b*], [b, c]].
HermitianOperator assemble_block(const HermitianOperator& a, const Matrix& b,
                                 const HermitianOperator& c);

bool check_block_psd(const HermitianOperator& a, const Matrix& b,
                     const HermitianOperator& c,
                     const TolerancePolicy& pol = {});

/// Full report for a system: completability, the minimal completion when it
/// exists, and the best constant <A_B y, y> for each supplied probe vector.
CompletionReport analyze_completion(const IncompleteBlockSystem& s,
                                    const std::vector<Vector>& probes = {},
                                    const TolerancePolicy& pol = {});

}  // namespace opschur
