#include "opschur/star_algebra.hpp"

#include <optional>

namespace opschur {

namespace {

Vector vectorize(const Matrix& m) {
  return Eigen::Map<const Vector>(m.data(), m.size());
}

}  // namespace

FiniteStarAlgebra::FiniteStarAlgebra(int envDim, std::vector<Matrix> basis,
                                     const TolerancePolicy& pol)
    : envDim_(envDim), basis_(std::move(basis)), coordTol_(pol.eqTol) {
  pol.validate();
  if (envDim_ <= 0) {
    throw DimensionMismatch("environment dimension must be positive");
  }
  const int k = basisSize();
  if (k == 0) {
    throw std::invalid_argument("algebra basis must be nonempty");
  }
  Matrix stacked(envDim_ * envDim_, k);
  for (int i = 0; i < k; ++i) {
    if (basis_[i].rows() != envDim_ || basis_[i].cols() != envDim_) {
      throw DimensionMismatch("basis elements must be envDim x envDim");
    }
    stacked.col(i) = vectorize(basis_[i]);
  }
  coordSolver_.compute(stacked);
  if (coordSolver_.rank() < k) {
    throw std::invalid_argument("algebra basis is linearly dependent");
  }

  leftMul_.resize(k, Matrix(k, k));
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      leftMul_[i].col(j) = coordinates(basis_[i] * basis_[j]);
    }
  }
  involution_.resize(k, k);
  for (int i = 0; i < k; ++i) {
    involution_.col(i) = coordinates(basis_[i].adjoint());
  }

  // Unit detection: u with e b_i = b_i = b_i e for every i, solved jointly in
  // the least-squares sense.
  Matrix system(2 * k * k, k);
  Vector rhs = Vector::Zero(2 * k * k);
  for (int i = 0; i < k; ++i) {
    for (int m = 0; m < k; ++m) {
      system.block(i * k, m, k, 1) = leftMul_[m].col(i);
    }
    system.block(k * k + i * k, 0, k, k) = leftMul_[i];
    rhs(i * k + i) = 1.0;
    rhs(k * k + i * k + i) = 1.0;
  }
  const Vector u = system.completeOrthogonalDecomposition().solve(rhs);
  if ((system * u - rhs).norm() <= coordTol_ * std::sqrt(2.0 * k)) {
    unital_ = true;
    unitCoords_ = u;
  }
}

const Vector& FiniteStarAlgebra::unitCoordinates() const {
  if (!unital_) throw Error("algebra has no unit element");
  return unitCoords_;
}

Vector FiniteStarAlgebra::coordinates(const Matrix& element) const {
  if (element.rows() != envDim_ || element.cols() != envDim_) {
    throw DimensionMismatch("element must be envDim x envDim");
  }
  const Vector flat = vectorize(element);
  Vector coords = coordSolver_.solve(flat);
  Matrix reconstructed = Matrix::Zero(envDim_, envDim_);
  for (int i = 0; i < basisSize(); ++i) {
    reconstructed += coords(i) * basis_[i];
  }
  if ((vectorize(reconstructed) - flat).norm() >
      coordTol_ * std::max(1.0, flat.norm())) {
    throw std::invalid_argument(
        "element lies outside the algebra span; the basis is not closed");
  }
  return coords;
}

Matrix FiniteStarAlgebra::element(const Vector& coords) const {
  if (coords.size() != basisSize()) {
    throw DimensionMismatch("coordinate vector has the wrong length");
  }
  Matrix out = Matrix::Zero(envDim_, envDim_);
  for (int i = 0; i < basisSize(); ++i) out += coords(i) * basis_[i];
  return out;
}

Vector FiniteStarAlgebra::productCoords(const Vector& x, const Vector& y) const {
  const int k = basisSize();
  if (x.size() != k || y.size() != k) {
    throw DimensionMismatch("coordinate vectors have the wrong length");
  }
  Vector out = Vector::Zero(k);
  for (int i = 0; i < k; ++i) out += x(i) * (leftMul_[i] * y);
  return out;
}

Vector FiniteStarAlgebra::adjointCoords(const Vector& x) const {
  if (x.size() != basisSize()) {
    throw DimensionMismatch("coordinate vector has the wrong length");
  }
  return involution_ * x.conjugate();
}

FiniteStarAlgebra FiniteStarAlgebra::scalars() {
  std::vector<Matrix> basis{Matrix::Identity(1, 1)};
  return FiniteStarAlgebra(1, std::move(basis));
}

FiniteStarAlgebra FiniteStarAlgebra::diagonal(int n) {
  std::vector<Matrix> basis;
  basis.reserve(n);
  for (int i = 0; i < n; ++i) {
    Matrix e = Matrix::Zero(n, n);
    e(i, i) = 1.0;
    basis.push_back(std::move(e));
  }
  return FiniteStarAlgebra(n, std::move(basis));
}

FiniteStarAlgebra FiniteStarAlgebra::fullMatrix(int n) {
  std::vector<Matrix> basis;
  basis.reserve(n * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      Matrix e = Matrix::Zero(n, n);
      e(i, j) = 1.0;
      basis.push_back(std::move(e));
    }
  }
  return FiniteStarAlgebra(n, std::move(basis));
}

Functional::Functional(AlgebraPtr algebra, Vector values)
    : algebra_(std::move(algebra)), values_(std::move(values)) {
  if (!algebra_) throw std::invalid_argument("functional requires an algebra");
  if (values_.size() != algebra_->basisSize()) {
    throw DimensionMismatch("value vector must match the basis size");
  }
}

Complex Functional::operator()(const Vector& coords) const {
  if (coords.size() != values_.size()) {
    throw DimensionMismatch("coordinate vector has the wrong length");
  }
  return (values_.transpose() * coords)(0, 0);
}

Matrix Functional::gramMatrix() const {
  const int k = algebra_->basisSize();
  Matrix gram = Matrix::Zero(k, k);
  const Matrix& invol = algebra_->involutionMatrix();
  for (int m = 0; m < k; ++m) {
    // f on the products b_m b_j for all j.
    const Eigen::RowVectorXcd throughLeft =
        values_.transpose() * algebra_->leftMultiplier(m);
    gram += invol.row(m).transpose() * throughLeft;
  }
  return gram;
}

namespace {

Functional combine(const Functional& f, const Functional& g, Complex alpha,
                   Complex beta) {
  if (f.algebra() != g.algebra()) {
    throw DimensionMismatch("functionals live on different algebras");
  }
  return Functional(f.algebra(), alpha * f.values() + beta * g.values());
}

}  // namespace

Functional Functional::operator+(const Functional& other) const {
  return combine(*this, other, 1.0, 1.0);
}

Functional Functional::operator-(const Functional& other) const {
  return combine(*this, other, 1.0, -1.0);
}

Functional Functional::scaledBy(Complex factor) const {
  return Functional(algebra_, factor * values_);
}

namespace {

struct GnsInternal {
  GnsTriple triple;
  Matrix rangeBasis;       // k x m eigenvectors above the cutoff
  RealVector rangeValues;  // the corresponding eigenvalues
};

bool representable_impl(const Functional& f, const TolerancePolicy& pol,
                        std::optional<PsdOperator>* gramOut) {
  const Matrix gram = f.gramMatrix();
  if ((gram - gram.adjoint()).norm() > pol.eqTol * std::max(1.0, gram.norm())) {
    return false;
  }
  std::optional<PsdOperator> psd;
  try {
    psd.emplace(make_psd(HermitianOperator(gram), pol));
  } catch (const NotPositive&) {
    return false;
  }
  if (!range_inclusion(f.values().conjugate(), *psd, pol)) {
    return false;
  }
  if (gramOut) *gramOut = std::move(psd);
  return true;
}

GnsInternal gns_internal(const Functional& f, const TolerancePolicy& pol) {
  std::optional<PsdOperator> gram;
  if (!representable_impl(f, pol, &gram)) {
    throw NotRepresentable("functional is not representable");
  }
  const int k = f.algebra()->basisSize();
  const int m = gram->numericalRank();

  GnsInternal out;
  out.rangeBasis = gram->eigenvectors().rightCols(m);
  out.rangeValues = gram->eigenvalues().tail(m);

  const RealVector sqrtVals = out.rangeValues.cwiseSqrt();
  const RealVector invSqrtVals = sqrtVals.cwiseInverse();

  GnsTriple& t = out.triple;
  t.hilbertDim = m;
  t.gram = gram->base().matrix();
  t.embedding = sqrtVals.asDiagonal() * out.rangeBasis.adjoint();
  t.repMatrices.reserve(k);
  for (int i = 0; i < k; ++i) {
    t.repMatrices.push_back(sqrtVals.asDiagonal() *
                            (out.rangeBasis.adjoint() *
                             f.algebra()->leftMultiplier(i) * out.rangeBasis) *
                            invSqrtVals.asDiagonal());
  }
  t.cyclic = invSqrtVals.asDiagonal() *
             (out.rangeBasis.adjoint() * f.values().conjugate());
  t.cyclicNormSq = t.cyclic.squaredNorm();
  return out;
}

/// Riesz vector eta in the GNS space of f with g(a) = <pi(a) xi, eta>.
Vector riesz_vector(const GnsInternal& g, const Vector& targetValues) {
  const RealVector invSqrtVals = g.rangeValues.cwiseSqrt().cwiseInverse();
  return invSqrtVals.asDiagonal() *
         (g.rangeBasis.adjoint() * targetValues.conjugate());
}

Vector evaluate_through_representation(const GnsInternal& g, const Vector& eta) {
  const int k = static_cast<int>(g.triple.repMatrices.size());
  Vector values(k);
  for (int i = 0; i < k; ++i) {
    values(i) = (eta.adjoint() * g.triple.repMatrices[i] * eta)(0, 0);
  }
  return values;
}

}  // namespace

bool is_representable(const Functional& f, const TolerancePolicy& pol) {
  return representable_impl(f, pol, nullptr);
}

GnsTriple gns(const Functional& f, const TolerancePolicy& pol) {
  return gns_internal(f, pol).triple;
}

Functional complement_functional(const Functional& f, const Functional& g,
                                 const TolerancePolicy& pol) {
  if (f.algebra() != g.algebra()) {
    throw DimensionMismatch("functionals live on different algebras");
  }
  GnsInternal carrier = gns_internal(f, pol);
  const Vector psiBar = g.values().conjugate();
  const Vector leak =
      psiBar - carrier.rangeBasis * (carrier.rangeBasis.adjoint() * psiBar);
  if (leak.norm() > pol.eqTol * std::max(1.0, psiBar.norm())) {
    throw NotDominated("|g(a)|^2 <= C f(a*a) fails; no bounded Riesz vector");
  }
  const Vector eta = riesz_vector(carrier, g.values());
  return Functional(f.algebra(), evaluate_through_representation(carrier, eta));
}

Functional parallel_sum_functional(const Functional& f, const Functional& g,
                                   const TolerancePolicy& pol) {
  if (!is_representable(f, pol) || !is_representable(g, pol)) {
    throw NotRepresentable("parallel sum requires representable operands");
  }
  const Functional h = complement_functional(f + g, f, pol);
  return f - h;
}

Functional parallel_diff_functional(const Functional& g, const Functional& f,
                                    const TolerancePolicy& pol) {
  if (f.algebra() != g.algebra()) {
    throw DimensionMismatch("functionals live on different algebras");
  }
  const Functional difference = f - g;
  std::optional<PsdOperator> diffGram;
  if (!representable_impl(difference, pol, &diffGram)) {
    throw NotDefined("f - g is not representable-positive");
  }
  if (!range_inclusion(f.values().conjugate(), *diffGram, pol)) {
    throw NotDefined(
        "|f(a)|^2 <= C (f(a*a) - g(a*a)) fails; the parallel difference "
        "supremum is infinite");
  }
  const Functional h = complement_functional(difference, f, pol);
  return h - f;
}

std::pair<Functional, Functional> lebesgue_decompose_functional(
    const Functional& f, const Functional& g, const TolerancePolicy& pol) {
  if (!is_representable(f, pol) || !is_representable(g, pol)) {
    throw NotRepresentable("Lebesgue decomposition requires representable operands");
  }
  const Functional gf = parallel_sum_functional(g, f, pol);
  const Functional regular = complement_functional(g - gf, g, pol) - g;
  return {regular, f - regular};
}

HermitianOperator induced_operator(const Functional& f) {
  return HermitianOperator(f.gramMatrix());
}

}  // namespace opschur
