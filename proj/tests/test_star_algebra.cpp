#include <doctest.h>

#include <memory>

#include "opschur/completion.hpp"
#include "opschur/lebesgue.hpp"
#include "opschur/parallel.hpp"
#include "opschur/star_algebra.hpp"
#include "test_support.hpp"

using namespace opschur;
using namespace opschur::test;

namespace {
const TolerancePolicy kPol;

AlgebraPtr scalars() {
  return std::make_shared<FiniteStarAlgebra>(FiniteStarAlgebra::scalars());
}
AlgebraPtr diagonalAlg(int n) {
  return std::make_shared<FiniteStarAlgebra>(FiniteStarAlgebra::diagonal(n));
}
AlgebraPtr fullAlg(int n) {
  return std::make_shared<FiniteStarAlgebra>(FiniteStarAlgebra::fullMatrix(n));
}

Functional functional(const AlgebraPtr& alg, std::initializer_list<Complex> values) {
  Vector v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (Complex c : values) v(i++) = c;
  return Functional(alg, v);
}

/// Positive functional a -> tr(rho a); representable for every *-subalgebra.
Functional trace_functional(const AlgebraPtr& alg, const Matrix& rho) {
  Vector values(alg->basisSize());
  for (int i = 0; i < alg->basisSize(); ++i) {
    values(i) = (rho * alg->basisElements()[i]).trace();
  }
  return Functional(alg, values);
}

Functional random_state(const AlgebraPtr& alg, std::mt19937_64& rng, int rank) {
  return trace_functional(alg, random_psd(alg->envDim(), rank, rng));
}
}  // namespace

TEST_CASE("algebra construction and closure checks") {
  const AlgebraPtr diag = diagonalAlg(2);
  CHECK(diag->unital());
  CHECK((diag->unitCoordinates() - Vector::Ones(2)).norm() <= 1e-10);

  const AlgebraPtr full = fullAlg(2);
  CHECK(full->unital());
  CHECK(full->basisSize() == 4);

  // Span of E12 alone is closed under products (E12^2 = 0) but not under
  // the involution.
  Matrix e12 = Matrix::Zero(2, 2);
  e12(0, 1) = 1.0;
  CHECK_THROWS_AS(FiniteStarAlgebra(2, {e12}, kPol), std::invalid_argument);

  // Span of {E12, E21} is involution-closed but not product-closed.
  Matrix e21 = Matrix::Zero(2, 2);
  e21(1, 0) = 1.0;
  CHECK_THROWS_AS(FiniteStarAlgebra(2, {e12, e21}, kPol), std::invalid_argument);

  // A non-unital algebra: the span of E11 inside 2x2 matrices.
  Matrix e11 = Matrix::Zero(2, 2);
  e11(0, 0) = 1.0;
  const FiniteStarAlgebra corner(2, {e11}, kPol);
  CHECK(corner.unital());  // E11 is its own unit within the span

  CHECK_THROWS_AS(FiniteStarAlgebra(2, {e11, e11}, kPol), std::invalid_argument);
}

TEST_CASE("structure constants reproduce products and adjoints") {
  std::mt19937_64 rng(71);
  const AlgebraPtr full = fullAlg(2);
  for (int trial = 0; trial < 10; ++trial) {
    const Vector x = random_vec(4, rng);
    const Vector y = random_vec(4, rng);
    const Matrix xs = full->element(x);
    const Matrix ys = full->element(y);
    CHECK((full->element(full->productCoords(x, y)) - xs * ys).norm() <= 1e-10);
    CHECK((full->element(full->adjointCoords(x)) - xs.adjoint()).norm() <= 1e-10);
  }
}

TEST_CASE("representability on scalars and diagonal algebras") {
  const AlgebraPtr c = scalars();
  CHECK(is_representable(functional(c, {2.0}), kPol));
  CHECK_FALSE(is_representable(functional(c, {-1.0}), kPol));

  const AlgebraPtr c2 = diagonalAlg(2);
  CHECK(is_representable(functional(c2, {1.0, 0.0}), kPol));
  // Value outside the gram range: bounded Riesz vector cannot exist.
  CHECK_FALSE(is_representable(functional(c2, {0.0, Complex(0, 1)}), kPol));
  CHECK_FALSE(is_representable(functional(c2, {1.0, -0.5}), kPol));
}

TEST_CASE("GNS construction on the basic algebras") {
  {
    const GnsTriple t = gns(functional(scalars(), {2.0}), kPol);
    CHECK(t.hilbertDim == 1);
    CHECK(t.cyclicNormSq == doctest::Approx(2.0));
  }
  {
    const GnsTriple t = gns(functional(diagonalAlg(2), {1.0, 1.0}), kPol);
    CHECK(t.hilbertDim == 2);
    for (const Matrix& rep : t.repMatrices) {
      CHECK((rep - rep.cwiseProduct(Matrix::Identity(2, 2))).norm() <= 1e-10);
    }
  }
  {
    const GnsTriple t = gns(functional(diagonalAlg(2), {0.0, 0.0}), kPol);
    CHECK(t.hilbertDim == 0);
    CHECK(t.cyclicNormSq == doctest::Approx(0.0));
  }
  CHECK_THROWS_AS(gns(functional(scalars(), {-1.0}), kPol), NotRepresentable);
}

TEST_CASE("GNS fidelity, multiplicativity, and the minimal constant") {
  std::mt19937_64 rng(72);
  const std::vector<AlgebraPtr> algebras{scalars(), diagonalAlg(2),
                                         diagonalAlg(3), fullAlg(2)};
  for (const AlgebraPtr& alg : algebras) {
    for (int trial = 0; trial < 10; ++trial) {
      const int rank = 1 + static_cast<int>(rng() % alg->envDim());
      const Functional f = random_state(alg, rng, rank);
      REQUIRE(is_representable(f, kPol));
      const GnsTriple t = gns(f, kPol);
      const int k = alg->basisSize();

      for (int i = 0; i < k; ++i) {
        // f(b_i) = <pi(b_i) xi, xi>
        const Complex reproduced =
            (t.cyclic.adjoint() * t.repMatrices[i] * t.cyclic)(0, 0);
        CHECK(std::abs(reproduced - f.valueOnBasis(i)) <= 1e-9);
        // pi(b_i) xi equals the class of b_i in the GNS space.
        CHECK((t.repMatrices[i] * t.cyclic - t.embedding.col(i)).norm() <= 1e-9);
      }
      // Multiplicativity and involution through structure constants.
      for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j) {
          const Vector prod =
              alg->productCoords(Vector::Unit(k, i), Vector::Unit(k, j));
          Matrix expected = Matrix::Zero(t.hilbertDim, t.hilbertDim);
          for (int l = 0; l < k; ++l) expected += prod(l) * t.repMatrices[l];
          CHECK((t.repMatrices[i] * t.repMatrices[j] - expected).norm() <= 1e-9);
        }
        const Vector adj = alg->adjointCoords(Vector::Unit(k, i));
        Matrix expectedAdj = Matrix::Zero(t.hilbertDim, t.hilbertDim);
        for (int l = 0; l < k; ++l) expectedAdj += adj(l) * t.repMatrices[l];
        CHECK((t.repMatrices[i].adjoint() - expectedAdj).norm() <= 1e-9);
      }

      // cyclicNormSq is the least admissible C: no sampled element violates
      // the bound, and the unit attains it.
      if (f.values().norm() > 1e-12) {
        double bestRatio = 0.0;
        for (int probe = 0; probe < 100; ++probe) {
          const Vector a = random_vec(k, rng);
          const Complex fa = f(a);
          const double faa =
              f(alg->productCoords(alg->adjointCoords(a), a)).real();
          if (faa <= 1e-6) {
            CHECK(std::abs(fa) <= 1e-2);
            continue;
          }
          bestRatio = std::max(bestRatio, std::norm(fa) / faa);
        }
        CHECK(bestRatio <= t.cyclicNormSq * (1.0 + 1e-6));
        if (alg->unital()) {
          const Complex fUnit = f(alg->unitCoordinates());
          const double unitRatio = std::norm(fUnit) / fUnit.real();
          CHECK(unitRatio >= t.cyclicNormSq * (1.0 - 1e-3));
        }
      }
    }
  }
}

TEST_CASE("functional complement on small algebras") {
  {
    const AlgebraPtr c = scalars();
    const Functional h =
        complement_functional(functional(c, {1.0}), functional(c, {Complex(0.6, 0.8)}), kPol);
    CHECK(std::abs(h.valueOnBasis(0) - Complex(1.0, 0.0)) <= 1e-10);
  }
  {
    const AlgebraPtr c2 = diagonalAlg(2);
    const Functional h = complement_functional(functional(c2, {1.0, 1.0}),
                                               functional(c2, {0.0, 0.0}), kPol);
    CHECK(h.values().norm() <= 1e-12);
  }
  {
    const AlgebraPtr c2 = diagonalAlg(2);
    const Functional h = complement_functional(functional(c2, {1.0, 1.0}),
                                               functional(c2, {1.0, 0.0}), kPol);
    CHECK(std::abs(h.valueOnBasis(0) - 1.0) <= 1e-10);
    CHECK(std::abs(h.valueOnBasis(1)) <= 1e-10);
  }
  {
    const AlgebraPtr c2 = diagonalAlg(2);
    CHECK_THROWS_AS(complement_functional(functional(c2, {1.0, 0.0}),
                                          functional(c2, {0.0, 1.0}), kPol),
                    NotDominated);
  }
}

TEST_CASE("block inequality and minimality of the functional complement") {
  std::mt19937_64 rng(73);
  const AlgebraPtr alg = fullAlg(2);
  const int k = alg->basisSize();
  for (int trial = 0; trial < 10; ++trial) {
    const Functional f = random_state(alg, rng, 2);
    const Functional g = random_state(alg, rng, 1 + static_cast<int>(rng() % 2));
    const Functional h = complement_functional(f, g, kPol);

    for (int probe = 0; probe < 50; ++probe) {
      const Vector a = random_vec(k, rng);
      const Vector b = random_vec(k, rng);
      const double lhs =
          f(alg->productCoords(alg->adjointCoords(a), a)).real() +
          2.0 * g(alg->productCoords(alg->adjointCoords(b), a)).real() +
          h(alg->productCoords(alg->adjointCoords(b), b)).real();
      CHECK(lhs >= -1e-8);
    }

    // Shrinking h breaks the block inequality: the assembled coordinate
    // block acquires a negative eigenvalue whose eigenvector yields a
    // violating pair.
    const Functional smaller = h.scaledBy(0.98);
    const Matrix kf = induced_operator(f).matrix();
    const Matrix kg = induced_operator(g).matrix();
    const Matrix kh = induced_operator(smaller).matrix();
    Matrix block(2 * k, 2 * k);
    block.topLeftCorner(k, k) = kf;
    block.topRightCorner(k, k) = kg.adjoint();
    block.bottomLeftCorner(k, k) = kg;
    block.bottomRightCorner(k, k) = kh;
    Eigen::SelfAdjointEigenSolver<Matrix> solver(block);
    if (h.values().norm() > 1e-9) {
      REQUIRE(solver.eigenvalues()(0) < -1e-12);
      const Vector witness = solver.eigenvectors().col(0);
      const Vector a = witness.head(k);
      const Vector b = witness.tail(k);
      const double lhs =
          f(alg->productCoords(alg->adjointCoords(a), a)).real() +
          2.0 * g(alg->productCoords(alg->adjointCoords(b), a)).real() +
          smaller(alg->productCoords(alg->adjointCoords(b), b)).real();
      CHECK(lhs < 0.0);
    }
  }
}

TEST_CASE("functional parallel sum") {
  const AlgebraPtr c2 = diagonalAlg(2);
  {
    const Functional s = parallel_sum_functional(functional(c2, {1.0, 1.0}),
                                                 functional(c2, {1.0, 0.0}), kPol);
    CHECK(std::abs(s.valueOnBasis(0) - 0.5) <= 1e-10);
    CHECK(std::abs(s.valueOnBasis(1)) <= 1e-10);
  }
  {
    std::mt19937_64 rng(74);
    const Functional f = random_state(c2, rng, 2);
    const Functional zero = functional(c2, {0.0, 0.0});
    CHECK(parallel_sum_functional(f, zero, kPol).values().norm() <= 1e-10);
    const Functional half = parallel_sum_functional(f, f, kPol);
    CHECK((half.values() - 0.5 * f.values()).norm() <= 1e-10);
  }
  CHECK_THROWS_AS(parallel_sum_functional(functional(c2, {1.0, -1.0}),
                                          functional(c2, {1.0, 0.0}), kPol),
                  NotRepresentable);
}

TEST_CASE("functional parallel difference") {
  const AlgebraPtr c = scalars();
  {
    const Functional d = parallel_diff_functional(functional(c, {0.5}),
                                                  functional(c, {1.0}), kPol);
    CHECK(std::abs(d.valueOnBasis(0) - 1.0) <= 1e-10);
  }
  {
    const Functional d = parallel_diff_functional(functional(c, {0.0}),
                                                  functional(c, {1.0}), kPol);
    CHECK(std::abs(d.valueOnBasis(0)) <= 1e-12);
  }
  CHECK_THROWS_AS(parallel_diff_functional(functional(c, {1.0}),
                                           functional(c, {1.0}), kPol),
                  NotDefined);
}

TEST_CASE("functional Lebesgue decomposition") {
  const AlgebraPtr c2 = diagonalAlg(2);
  {
    const auto [regular, singular] = lebesgue_decompose_functional(
        functional(c2, {1.0, 1.0}), functional(c2, {1.0, 0.0}), kPol);
    CHECK(std::abs(regular.valueOnBasis(0) - 1.0) <= 1e-9);
    CHECK(std::abs(regular.valueOnBasis(1)) <= 1e-9);
    CHECK(std::abs(singular.valueOnBasis(0)) <= 1e-9);
    CHECK(std::abs(singular.valueOnBasis(1) - 1.0) <= 1e-9);
  }
  {
    std::mt19937_64 rng(75);
    const Functional f = random_state(c2, rng, 2);
    const auto [regular, singular] = lebesgue_decompose_functional(f, f, kPol);
    CHECK((regular.values() - f.values()).norm() <= 1e-9);
    CHECK(singular.values().norm() <= 1e-9);

    const Functional zero = functional(c2, {0.0, 0.0});
    const auto [r0, s0] = lebesgue_decompose_functional(f, zero, kPol);
    CHECK(r0.values().norm() <= 1e-12);
    CHECK((s0.values() - f.values()).norm() <= 1e-12);
  }
}

TEST_CASE("induced operator examples") {
  const AlgebraPtr c2 = diagonalAlg(2);
  CHECK(approx_equal(induced_operator(functional(c2, {1.0, 1.0})).matrix(),
                     Matrix::Identity(2, 2), 1e-12));
  CHECK(induced_operator(functional(c2, {0.0, 0.0})).matrix().norm() <= 1e-12);
  CHECK(approx_equal(induced_operator(functional(scalars(), {3.0})).matrix(),
                     3.0 * Matrix::Identity(1, 1), 1e-12));
}

TEST_CASE("the functional layer and the matrix layer tell one story") {
  std::mt19937_64 rng(76);
  const std::vector<AlgebraPtr> algebras{scalars(), diagonalAlg(2),
                                         diagonalAlg(3), fullAlg(2)};
  for (const AlgebraPtr& alg : algebras) {
    for (int trial = 0; trial < 8; ++trial) {
      const Functional f = random_state(alg, rng, alg->envDim());
      const Functional g =
          random_state(alg, rng, 1 + static_cast<int>(rng() % alg->envDim()));
      const Matrix kf = induced_operator(f).matrix();
      const Matrix kg = induced_operator(g).matrix();
      const PsdOperator kfp = make_psd(HermitianOperator(kf), kPol);
      const PsdOperator kgp = make_psd(HermitianOperator(kg), kPol);

      // Parallel sums commute with the induced-operator map.
      const Matrix viaFunctional =
          induced_operator(parallel_sum_functional(f, g, kPol)).matrix();
      const Matrix viaMatrix = parallel_sum(kfp, kgp, kPol).base().matrix();
      CHECK((viaFunctional - viaMatrix).norm() <=
            1e-7 * std::max(1.0, viaMatrix.norm()));

      // Complements do as well.
      const Matrix complementFunctional =
          induced_operator(complement_functional(f, g, kPol)).matrix();
      const Matrix complementMatrix =
          complement(IncompleteBlockSystem(kfp, kg), kPol).base().matrix();
      CHECK((complementFunctional - complementMatrix).norm() <=
            1e-7 * std::max(1.0, complementMatrix.norm()));

      // And the Lebesgue parts.
      const auto [regular, singular] = lebesgue_decompose_functional(f, g, kPol);
      const LebesgueSplit split = lebesgue_decompose(kfp, kgp, kPol);
      CHECK((induced_operator(regular).matrix() - split.regular.base().matrix())
                .norm() <= 1e-6 * std::max(1.0, kf.norm()));

      // The regular part is absolutely continuous and the singular part is
      // singular for the weight, through the induced operators.
      CHECK(absolutely_continuous(
          make_psd(HermitianOperator(induced_operator(regular).matrix()), kPol),
          kgp, kPol));
      CHECK(mutually_singular(
          make_psd(HermitianOperator(induced_operator(singular).matrix()), kPol),
          kgp, kPol));

      // Unital shortcut: f_g = conj(A_B 1).
      if (alg->unital()) {
        const Vector viaBlock =
            (complementMatrix * alg->unitCoordinates()).conjugate();
        const Functional fg = complement_functional(f, g, kPol);
        CHECK((fg.values() - viaBlock).norm() <=
              1e-8 * std::max(1.0, viaBlock.norm()));
      }
    }
  }
}
