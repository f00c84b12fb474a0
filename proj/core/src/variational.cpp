#include "opschur/variational.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <random>

namespace opschur {

namespace {

constexpr int kStarts = 32;

Complex dotc(const Vector& a, const Vector& b) { return a.dot(b); }  // a* b

Vector random_direction(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vector v(n);
  for (int i = 0; i < n; ++i) v(i) = Complex(gauss(rng), gauss(rng));
  return v;
}

struct QuadraticData {
  Matrix m;       // Hermitian part of the quadratic coefficient
  Vector w;       // linear coefficient: objective holds 2 Re(w* x)
  double shift;   // constant term
  double psdFloor;
  double linThresh;
};

QuadraticData prepare(const Matrix& m, Vector w, double shift,
                      const TolerancePolicy& pol) {
  QuadraticData q;
  q.m = 0.5 * (m + m.adjoint().eval());
  q.w = std::move(w);
  q.shift = shift;
  q.psdFloor = pol.psdTol * std::max(1.0, q.m.norm());
  q.linThresh = pol.eqTol * std::max(1.0, q.w.norm());
  return q;
}

double objective_shifted(const QuadraticData& q, const Vector& x) {
  return 2.0 * dotc(q.w, x).real() - dotc(x, q.m * x).real() + q.shift;
}

/// Hunts for a constraint-null direction carrying objective mass: the
/// least-squares residual of M x ~ w is the component of w outside ran M,
/// which is exactly the certificate of an infinite supremum. Computed by
/// conjugate gradients on the normal equations, i.e. exact line searches
/// along conjugate directions using matrix-vector products only.
std::optional<Vector> find_blowup_direction(const QuadraticData& q) {
  const int n = static_cast<int>(q.w.size());
  if (n == 0 || q.w.norm() < 1e-300) return std::nullopt;
  Vector r = q.w;           // residual w - M x
  Vector s = q.m * r;       // normal-equation gradient, stays in ran M
  Vector p = s;
  double sNormSq = s.squaredNorm();
  const double done = 1e-26 * std::max(1.0, q.w.squaredNorm());
  const int maxIter = 4 * n + 16;
  for (int it = 0; it < maxIter && sNormSq > done; ++it) {
    const Vector mp = q.m * p;
    const double mpNormSq = mp.squaredNorm();
    if (mpNormSq < 1e-300) break;
    const double alpha = sNormSq / mpNormSq;
    r -= alpha * mp;
    s = q.m * r;
    const double sNext = s.squaredNorm();
    p = s + (sNext / sNormSq) * p;
    sNormSq = sNext;
  }
  const double rn = r.norm();
  if (rn <= q.linThresh) return std::nullopt;
  const Vector d = r / rn;
  if (dotc(d, q.m * d).real() <= q.psdFloor &&
      std::abs(dotc(q.w, d)) > q.linThresh) {
    return d;
  }
  return std::nullopt;
}

/// sup over x of 2 Re(w* x) - x* M x + shift, by exact complex-step line
/// searches along the gradient and random directions alternately.
OracleEstimate sup_shifted(const QuadraticData& q, int budget,
                           std::mt19937_64& rng) {
  const int n = static_cast<int>(q.w.size());
  OracleEstimate best;
  best.value = q.shift;
  best.witness = Vector::Zero(n);
  if (n == 0) {
    best.converged = true;
    return best;
  }
  const double gradTol = 1e-6 * std::max(1.0, q.w.norm());
  int iterations = 0;

  if (auto leak = find_blowup_direction(q)) {
    OracleEstimate inf;
    inf.unbounded = true;
    inf.value = std::numeric_limits<double>::infinity();
    inf.witness = *leak;
    return inf;
  }

  for (int start = 0; start < kStarts; ++start) {
    Vector x = start == 0 ? Vector(Vector::Zero(n))
                          : Vector(random_direction(n, rng));
    for (int it = 0; it < budget; ++it) {
      ++iterations;
      const Vector residual = q.w - q.m * x;
      Vector d = (it % 2 == 0) ? residual : random_direction(n, rng);
      const double dn = d.norm();
      if (dn < 1e-300) continue;
      d /= dn;
      const double qd = dotc(d, q.m * d).real();
      const Complex zeta = dotc(d, residual);
      if (qd <= q.psdFloor) {
        if (qd < -q.psdFloor || std::abs(zeta) > q.linThresh) {
          OracleEstimate inf;
          inf.unbounded = true;
          inf.value = std::numeric_limits<double>::infinity();
          inf.witness = d;
          inf.iterations = iterations;
          return inf;
        }
        continue;
      }
      x += (zeta / qd) * d;
      if (x.norm() > 1e9 * std::max(1.0, q.w.norm())) break;
      if (it % 2 == 0 && residual.norm() <= gradTol) break;
    }
    const double value = objective_shifted(q, x);
    if (value > best.value) {
      best.value = value;
      best.witness = x;
    }
  }
  best.iterations = iterations;
  best.converged = (q.w - q.m * best.witness).norm() <= gradTol;
  return best;
}

struct PlaneEigen {
  double lambdaLow = 0.0;
  double lambdaHigh = 0.0;
  Eigen::Vector2cd low;
  Eigen::Vector2cd high;
};

PlaneEigen eigen2x2(double a, double b, const Complex& c) {
  PlaneEigen out;
  const double tr = a + b;
  const double disc = std::sqrt(std::max(0.0, (a - b) * (a - b) + 4.0 * std::norm(c)));
  out.lambdaHigh = 0.5 * (tr + disc);
  out.lambdaLow = 0.5 * (tr - disc);
  if (std::abs(c) < 1e-300 && std::abs(a - b) < 1e-300) {
    out.high = Eigen::Vector2cd(1.0, 0.0);
    out.low = Eigen::Vector2cd(0.0, 1.0);
    return out;
  }
  Eigen::Vector2cd v(c, Complex(out.lambdaHigh - a, 0.0));
  if (v.norm() < 1e-300) v = Eigen::Vector2cd(Complex(out.lambdaHigh - b, 0.0), std::conj(c));
  out.high = v / v.norm();
  out.low = Eigen::Vector2cd(-std::conj(out.high(1)), std::conj(out.high(0)));
  return out;
}


struct PlaneStep {
  bool blowup = false;      // null combination carrying objective mass found
  Vector blowupDirection;
  bool moved = false;
  Vector point;             // new point on the constraint boundary
  double value = 0.0;       // |w* point|^2
};

/// Exact maximization of |w* x|^2 over the intersection of the constraint
/// ellipsoid with the plane spanned by the boundary point x and direction d.
PlaneStep plane_step(const QuadraticData& q, const TolerancePolicy& pol,
                     const Vector& x, Vector d) {
  PlaneStep out;
  const double dn = d.norm();
  if (dn < 1e-300) return out;
  d /= dn;

  const Vector md = q.m * d;
  const double a = 1.0;  // x sits on the boundary, x* M x == 1
  const double b = dotc(d, md).real();
  const Complex c = dotc(x, md);
  const PlaneEigen pe = eigen2x2(a, b, c);
  const double cutoff = pol.rankCutoff(2, pe.lambdaHigh);
  if (pe.lambdaHigh <= cutoff) return out;

  const Eigen::Vector2cd u(std::conj(dotc(q.w, x)), std::conj(dotc(q.w, d)));
  Eigen::Vector2cd z;
  if (pe.lambdaLow > cutoff) {
    z = pe.high * (pe.high.dot(u) / pe.lambdaHigh) +
        pe.low * (pe.low.dot(u) / pe.lambdaLow);
  } else {
    // Degenerate plane: a constraint-null combination with objective mass
    // certifies an infinite supremum.
    Vector nullCombo = pe.low(0) * x + pe.low(1) * d;
    const double nn = nullCombo.norm();
    if (nn > 1e-300) {
      nullCombo /= nn;
      if (dotc(nullCombo, q.m * nullCombo).real() <= q.psdFloor &&
          std::abs(dotc(q.w, nullCombo)) > q.linThresh) {
        out.blowup = true;
        out.blowupDirection = std::move(nullCombo);
        return out;
      }
    }
    z = pe.high * (pe.high.dot(u) / pe.lambdaHigh);
  }
  Vector candidate = z(0) * x + z(1) * d;
  const double qc = dotc(candidate, q.m * candidate).real();
  if (qc <= q.psdFloor) return out;
  candidate /= std::sqrt(qc);
  out.value = std::norm(dotc(q.w, candidate));
  out.point = std::move(candidate);
  out.moved = true;
  return out;
}

/// sup over x* M x <= 1 of |w* x|^2, by exact maximization over the plane
/// spanned by the current point and an ascent direction each step.
OracleEstimate sup_bounded(const QuadraticData& q, int budget,
                           const TolerancePolicy& pol, std::mt19937_64& rng) {
  const int n = static_cast<int>(q.w.size());
  OracleEstimate best;
  best.witness = Vector::Zero(n);
  if (n == 0 || q.w.norm() == 0.0) {
    best.converged = true;
    return best;
  }
  int iterations = 0;

  auto flagUnbounded = [&](const Vector& direction) -> OracleEstimate {
    OracleEstimate inf;
    inf.unbounded = true;
    inf.value = std::numeric_limits<double>::infinity();
    inf.witness = direction;
    inf.iterations = iterations;
    return inf;
  };

  auto isBlowupDirection = [&](const Vector& d) {
    const double dn = d.norm();
    if (dn < 1e-300) return false;
    const Vector unit = d / dn;
    return dotc(unit, q.m * unit).real() <= q.psdFloor &&
           std::abs(dotc(q.w, unit)) > q.linThresh;
  };

  if (auto leak = find_blowup_direction(q)) {
    return flagUnbounded(*leak);
  }

  for (int start = 0; start < kStarts; ++start) {
    Vector x = start == 0 ? Vector(q.w) : Vector(random_direction(n, rng));
    if (isBlowupDirection(x)) return flagUnbounded(x / x.norm());
    double qx = dotc(x, q.m * x).real();
    if (qx <= q.psdFloor * x.squaredNorm()) continue;
    x /= std::sqrt(qx);
    double value = std::norm(dotc(q.w, x));

    for (int it = 0; it < budget; ++it) {
      ++iterations;
      const Vector d = (it % 2 == 0) ? Vector(q.w) : random_direction(n, rng);
      const PlaneStep step = plane_step(q, pol, x, d);
      if (step.blowup) return flagUnbounded(step.blowupDirection);
      if (step.moved && step.value > value) {
        x = step.point;
        value = step.value;
      }
    }
    if (value > best.value) {
      best.value = value;
      best.witness = x;
    }
  }
  best.iterations = iterations;

  // Stationarity certificate: one more exact plane step along the objective
  // gradient and a few random probes must not improve the best value.
  if (best.value > 0.0) {
    double improvement = 0.0;
    Vector probe = q.w;
    for (int trial = 0; trial < 4; ++trial) {
      const PlaneStep step = plane_step(q, pol, best.witness, probe);
      if (step.blowup) return flagUnbounded(step.blowupDirection);
      if (step.moved) improvement = std::max(improvement, step.value - best.value);
      probe = random_direction(n, rng);
    }
    best.converged = improvement <= 1e-10 * std::max(1.0, best.value);
  }
  return best;
}

void require(bool cond, const char* message) {
  if (!cond) throw DimensionMismatch(message);
}

}  // namespace

OracleEstimate oracle_sup(SupObjective objective, const Matrix& first,
                          const Matrix& second, const Vector& y, int budget,
                          const TolerancePolicy& pol, std::uint64_t seed) {
  pol.validate();
  budget = std::max(budget, 1);
  std::mt19937_64 rng(seed);
  switch (objective) {
    case SupObjective::ComplementBounded:
    case SupObjective::ComplementShifted: {
      require(first.rows() == first.cols(), "A must be square");
      require(second.cols() == first.rows(), "B must map the space of A");
      require(y.size() == second.rows(), "y must live on the range space of B");
      QuadraticData q = prepare(first, second.adjoint() * y, 0.0, pol);
      return objective == SupObjective::ComplementBounded
                 ? sup_bounded(q, budget, pol, rng)
                 : sup_shifted(q, budget, rng);
    }
    case SupObjective::ComplementSelfAdjoint: {
      require(first.rows() == first.cols() && second.rows() == second.cols() &&
                  first.rows() == second.rows(),
              "operands must be square on one space");
      require(y.size() == first.rows(), "y dimension mismatch");
      QuadraticData q = prepare(first, second * y, 0.0, pol);
      return sup_shifted(q, budget, rng);
    }
    case SupObjective::ParallelDifference: {
      require(first.rows() == first.cols() && second.rows() == second.cols() &&
                  first.rows() == second.rows(),
              "operands must be square on one space");
      require(y.size() == first.rows(), "y dimension mismatch");
      const Matrix& b = first;
      const Matrix& a = second;
      const double constant = dotc(y, b * y).real();
      QuadraticData q = prepare(a - b, b * y, constant, pol);
      return sup_shifted(q, budget, rng);
    }
    case SupObjective::KvExtensionBounded:
    case SupObjective::KvExtensionShifted: {
      require(first.rows() == second.rows() && first.cols() == second.cols(),
              "domain basis and values must share a shape");
      require(y.size() == first.rows(), "y must live on the ambient space");
      QuadraticData q =
          prepare(first.adjoint() * second, second.adjoint() * y, 0.0, pol);
      return objective == SupObjective::KvExtensionBounded
                 ? sup_bounded(q, budget, pol, rng)
                 : sup_shifted(q, budget, rng);
    }
  }
  throw Error("unknown objective");
}

OracleEstimate oracle_inf(const Matrix& a, const Matrix& b, const Vector& y,
                          int budget, const TolerancePolicy& pol,
                          std::uint64_t seed) {
  pol.validate();
  budget = std::max(budget, 1);
  require(a.rows() == a.cols() && b.rows() == b.cols() && a.rows() == b.rows(),
          "operands must be square on one space");
  require(y.size() == a.rows(), "y dimension mismatch");
  std::mt19937_64 rng(seed);
  const Vector v = a * y;
  const double constant = dotc(y, v).real();
  QuadraticData q = prepare(a + b, -v, 0.0, pol);
  OracleEstimate raw = sup_shifted(q, budget, rng);
  OracleEstimate out;
  out.iterations = raw.iterations;
  out.witness = raw.witness;
  out.converged = raw.converged;
  if (raw.unbounded) {
    out.unbounded = true;
    out.value = -std::numeric_limits<double>::infinity();
    return out;
  }
  out.value = constant - raw.value;
  return out;
}

}  // namespace opschur
