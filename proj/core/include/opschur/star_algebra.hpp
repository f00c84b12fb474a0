#pragma once

#include <memory>
#include <utility>
#include <vector>

#include "opschur/psd.hpp"

namespace opschur {

/// A finite-dimensional *-algebra presented concretely as the span of k
/// linearly independent d x d matrices closed under products and adjoints.
/// Structure constants are cached at construction; instances are immutable
/// afterwards and safe to share across threads.
class FiniteStarAlgebra {
 public:
  FiniteStarAlgebra(int envDim, std::vector<Matrix> basis,
                    const TolerancePolicy& pol = {});

  int envDim() const { return envDim_; }
  int basisSize() const { return static_cast<int>(basis_.size()); }
  const std::vector<Matrix>& basisElements() const { return basis_; }

  bool unital() const { return unital_; }
  /// Coordinates of the unit element; throws Error when the algebra has none.
  const Vector& unitCoordinates() const;

  /// Least-squares coordinates of an element in the basis span; throws
  /// std::invalid_argument when the element falls outside the span.
  Vector coordinates(const Matrix& element) const;
  Matrix element(const Vector& coords) const;

  /// Left-multiplication operator: coordinates(b_i * a) = L_i coordinates(a).
  const Matrix& leftMultiplier(int i) const { return leftMul_[i]; }
  /// Column i holds the coordinates of b_i*.
  const Matrix& involutionMatrix() const { return involution_; }

  Vector productCoords(const Vector& x, const Vector& y) const;
  Vector adjointCoords(const Vector& x) const;

  static FiniteStarAlgebra scalars();
  static FiniteStarAlgebra diagonal(int n);
  static FiniteStarAlgebra fullMatrix(int n);

 private:
  int envDim_;
  std::vector<Matrix> basis_;
  Eigen::CompleteOrthogonalDecomposition<Matrix> coordSolver_;
  std::vector<Matrix> leftMul_;
  Matrix involution_;
  bool unital_ = false;
  Vector unitCoords_;
  double coordTol_;
};

using AlgebraPtr = std::shared_ptr<const FiniteStarAlgebra>;

/// A linear functional on a finite *-algebra, stored by its values on the
/// basis. Representability is a predicate, not an invariant.
class Functional {
 public:
  Functional(AlgebraPtr algebra, Vector values);

  const AlgebraPtr& algebra() const { return algebra_; }
  const Vector& values() const { return values_; }
  Complex valueOnBasis(int i) const { return values_(i); }
  /// Value on an element given by coordinates.
  Complex operator()(const Vector& coords) const;

  /// Gram matrix K with K(i, j) = f(b_i* b_j); z* K z = f(a* a) for the
  /// element a with coordinates z.
  Matrix gramMatrix() const;

  Functional operator+(const Functional& other) const;
  Functional operator-(const Functional& other) const;
  Functional scaledBy(Complex factor) const;

 private:
  AlgebraPtr algebra_;
  Vector values_;
};

/// GNS data of a representable functional: the Hilbert space dimension, the
/// Gram matrix of the basis vectors, the represented basis elements, the
/// cyclic vector, and its squared norm (the least constant C with
/// |f(a)|^2 <= C f(a*a)). embedding maps element coordinates to the
/// orthonormal GNS coordinates; its column j represents b_j.
struct GnsTriple {
  int hilbertDim = 0;
  Matrix gram;
  std::vector<Matrix> repMatrices;
  Vector cyclic;
  double cyclicNormSq = 0.0;
  Matrix embedding;
};

/// A functional is representable iff its Gram matrix is positive and the
/// value vector is supported on the Gram range (so a -> f(a) is bounded for
/// the induced seminorm).
bool is_representable(const Functional& f, const TolerancePolicy& pol = {});

/// GNS construction; throws NotRepresentable.
GnsTriple gns(const Functional& f, const TolerancePolicy& pol = {});

/// The smallest representable h with f(a*a) + g(b*a) + conj(g(b*a)) + h(b*b)
/// >= 0. Requires f representable and g dominated, |g(a)|^2 <= C f(a*a);
/// throws NotRepresentable or NotDominated.
Functional complement_functional(const Functional& f, const Functional& g,
                                 const TolerancePolicy& pol = {});

/// Parallel sum f : g = f - (f+g)_f; both operands must be representable.
Functional parallel_sum_functional(const Functional& f, const Functional& g,
                                   const TolerancePolicy& pol = {});

/// Parallel difference g / f = (f-g)_f - f; throws NotDefined when f - g is
/// not representable-positive or f is not dominated by it.
Functional parallel_diff_functional(const Functional& g, const Functional& f,
                                    const TolerancePolicy& pol = {});

/// Lebesgue-type decomposition of f with respect to g: returns (regular,
/// singular) with regular = (g - g:f)_g - g.
std::pair<Functional, Functional> lebesgue_decompose_functional(
    const Functional& f, const Functional& g, const TolerancePolicy& pol = {});

/// The operator induced on coordinates by (a, b) -> f(b* a); positive iff f
/// is a positive functional.
HermitianOperator induced_operator(const Functional& f);

}  // namespace opschur
