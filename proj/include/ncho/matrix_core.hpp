#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <complex>
#include <string>

#include "ncho/error.hpp"

namespace ncho {

template <typename Real>
using Complex = std::complex<Real>;

template <typename Real>
using Mat2 = Eigen::Matrix<std::complex<Real>, 2, 2>;

template <typename Real>
using Vec2 = Eigen::Matrix<std::complex<Real>, 2, 1>;

/// 2x2 complex Hermitian matrix stored by its independent entries
/// [[d0, off], [conj(off), d1]].
template <typename Real = double>
class Herm2 {
 public:
  using Scalar = Complex<Real>;

  Herm2() = default;
  Herm2(Real d0, Real d1, Scalar off = Scalar(0)) : d0_(d0), d1_(d1), off_(off) {}

  static Herm2 identity() { return Herm2(Real(1), Real(1)); }
  static Herm2 diagonal(Real d0, Real d1) { return Herm2(d0, d1); }

  /// Exact Hermiticity check; throws NotHermitian on any mismatch.
  static Herm2 from_matrix(const Mat2<Real>& m, const std::string& name = "matrix") {
    if (m(0, 0).imag() != Real(0) || m(1, 1).imag() != Real(0) ||
        m(1, 0) != std::conj(m(0, 1))) {
      throw Error(ErrorCode::NotHermitian, name + " is not Hermitian");
    }
    return Herm2(m(0, 0).real(), m(1, 1).real(), m(0, 1));
  }

  Real d0() const { return d0_; }
  Real d1() const { return d1_; }
  Scalar off() const { return off_; }

  Scalar operator()(int i, int j) const {
    if (i == j) return Scalar(i == 0 ? d0_ : d1_);
    return i == 0 ? off_ : std::conj(off_);
  }

  Mat2<Real> matrix() const {
    Mat2<Real> m;
    m << Scalar(d0_), off_, std::conj(off_), Scalar(d1_);
    return m;
  }

  Real trace() const { return d0_ + d1_; }
  Real det() const { return d0_ * d1_ - std::norm(off_); }
  bool positive_definite() const { return trace() > Real(0) && det() > Real(0); }

  /// Frobenius norm.
  Real norm() const { return std::sqrt(d0_ * d0_ + d1_ * d1_ + Real(2) * std::norm(off_)); }

  Vec2<Real> operator*(const Vec2<Real>& v) const {
    Vec2<Real> out;
    out(0) = d0_ * v(0) + off_ * v(1);
    out(1) = std::conj(off_) * v(0) + d1_ * v(1);
    return out;
  }

  friend Herm2 operator+(const Herm2& x, const Herm2& y) {
    return Herm2(x.d0_ + y.d0_, x.d1_ + y.d1_, x.off_ + y.off_);
  }
  friend Herm2 operator-(const Herm2& x, const Herm2& y) {
    return Herm2(x.d0_ - y.d0_, x.d1_ - y.d1_, x.off_ - y.off_);
  }
  friend Herm2 operator*(Real s, const Herm2& x) { return Herm2(s * x.d0_, s * x.d1_, s * x.off_); }
  friend Herm2 operator*(const Herm2& x, Real s) { return s * x; }

  friend bool operator==(const Herm2&, const Herm2&) = default;

 private:
  Real d0_ = 0;
  Real d1_ = 0;
  Scalar off_ = Scalar(0);
};

/// Positive-definite coefficient pair of H_{A,B} = B(-d²/dx²) + A x².
template <typename Real = double>
struct HermitianPair {
  Herm2<Real> A;
  Herm2<Real> B;
};

/// Strict positive-definiteness (trace > 0 and det > 0, no tolerance).
template <typename Real>
HermitianPair<Real> validate_pair(const Herm2<Real>& A, const Herm2<Real>& B) {
  if (!A.positive_definite()) throw Error(ErrorCode::NotPositiveDefinite, "A is not positive definite");
  if (!B.positive_definite()) throw Error(ErrorCode::NotPositiveDefinite, "B is not positive definite");
  return {A, B};
}

template <typename Real>
HermitianPair<Real> validate_pair(const Mat2<Real>& A, const Mat2<Real>& B) {
  return validate_pair(Herm2<Real>::from_matrix(A, "A"), Herm2<Real>::from_matrix(B, "B"));
}

template <typename Real = double>
struct Eig2 {
  std::array<Real, 2> values;       // ascending
  std::array<Vec2<Real>, 2> vectors;  // unit norm, mutually orthogonal
};

/// Closed-form eigendecomposition of a 2x2 Hermitian matrix.
template <typename Real>
Eig2<Real> eig2(const Herm2<Real>& m) {
  using std::abs;
  using std::sqrt;
  const Real mean = (m.d0() + m.d1()) / Real(2);
  const Real half_gap = (m.d0() - m.d1()) / Real(2);
  const Real radius = std::hypot(half_gap, abs(m.off()));

  Eig2<Real> out;
  out.values = {mean - radius, mean + radius};
  if (radius == Real(0)) {
    out.vectors[0] = Vec2<Real>(1, 0);
    out.vectors[1] = Vec2<Real>(0, 1);
    return out;
  }

  // Top eigenvector from whichever row of (M - λ I) is better conditioned.
  const Real hi = out.values[1];
  Vec2<Real> from_row0(m.off(), hi - m.d0());
  Vec2<Real> from_row1(hi - m.d1(), std::conj(m.off()));
  Vec2<Real> top = from_row0.norm() >= from_row1.norm() ? from_row0 : from_row1;
  top.normalize();
  out.vectors[1] = top;
  out.vectors[0] = Vec2<Real>(-std::conj(top(1)), std::conj(top(0)));
  return out;
}

template <typename Real>
Real commutator_norm(const Herm2<Real>& A, const Herm2<Real>& B) {
  return (A.matrix() * B.matrix() - B.matrix() * A.matrix()).norm();
}

/// Reduced coordinates (b, a, c, ξ) with B̃ = diag(1, b), Ã = [[a, ξ], [ξ̄, c]],
/// together with the transform such that H_{A,B} = b1 U* H_{Ã,B̃} U.
template <typename Real = double>
struct CanonicalParams {
  Real b = 1;
  Real a = 1;
  Real c = 1;
  Complex<Real> xi = Complex<Real>(0);
  Mat2<Real> transform_U = Mat2<Real>::Identity();
  Real scale_b1 = 1;

  Real xi_abs() const { return std::abs(xi); }
  Herm2<Real> A() const { return Herm2<Real>(a, c, xi); }
  Herm2<Real> B() const { return Herm2<Real>::diagonal(Real(1), b); }
  HermitianPair<Real> pair() const { return {A(), B()}; }

  /// AB = BA in canonical form iff b = 1 or ξ = 0.
  bool commutative() const { return b == Real(1) || xi == Complex<Real>(0); }

  /// Builds canonical parameters directly from a tetrad; U = I, b1 = 1.
  static CanonicalParams from_tetrad(Real b, Real a, Real c, Complex<Real> xi) {
    if (!(b >= Real(1)) || !(a > Real(0)) || !(c > Real(0)) || !(std::norm(xi) < a * c)) {
      throw Error(ErrorCode::OutsideRegion,
                  "tetrad violates b >= 1, a > 0, c > 0, |xi|^2 < a c");
    }
    CanonicalParams p;
    p.b = b;
    p.a = a;
    p.c = c;
    p.xi = xi;
    return p;
  }
};

/// Diagonalizes B (ascending eigenvalues b1 <= b2) and rescales by b1.
template <typename Real>
CanonicalParams<Real> canonicalize(const HermitianPair<Real>& pair) {
  const auto eb = eig2(pair.B);
  Mat2<Real> U = Mat2<Real>::Identity();
  if (eb.values[0] != eb.values[1]) {
    // Rows of U are the conjugated eigenvectors, so B = U* diag(b1, b2) U.
    U.row(0) = eb.vectors[0].adjoint();
    U.row(1) = eb.vectors[1].adjoint();
  }
  const Real b1 = eb.values[0];
  const Mat2<Real> At = U * pair.A.matrix() * U.adjoint() / b1;

  CanonicalParams<Real> p;
  p.b = eb.values[1] / b1;
  p.a = At(0, 0).real();
  p.c = At(1, 1).real();
  p.xi = At(0, 1);
  p.transform_U = U;
  p.scale_b1 = b1;
  return p;
}

/// b1 U* (Ã, B̃) U, the coefficients of the original operator.
template <typename Real>
HermitianPair<Real> reconstruct_pair(const CanonicalParams<Real>& p) {
  const Mat2<Real>& U = p.transform_U;
  const Mat2<Real> A = p.scale_b1 * U.adjoint() * p.A().matrix() * U;
  const Mat2<Real> B = p.scale_b1 * U.adjoint() * p.B().matrix() * U;
  // Symmetrize away rounding in the off-diagonal pair before the exact check.
  auto herm = [](const Mat2<Real>& m) {
    return Herm2<Real>(m(0, 0).real(), m(1, 1).real(), (m(0, 1) + std::conj(m(1, 0))) / Real(2));
  };
  return {herm(A), herm(B)};
}

template <typename Real>
void require_positive_alpha(Real alpha) {
  if (!(alpha > Real(0))) throw Error(ErrorCode::NonPositiveAlpha, "alpha must be positive");
}

/// M_α = α⁻¹A + αB.
template <typename Real>
Herm2<Real> m_alpha(const HermitianPair<Real>& pair, Real alpha) {
  require_positive_alpha(alpha);
  return (Real(1) / alpha) * pair.A + alpha * pair.B;
}

/// N_α = α⁻¹A − αB.
template <typename Real>
Herm2<Real> n_alpha(const HermitianPair<Real>& pair, Real alpha) {
  require_positive_alpha(alpha);
  return (Real(1) / alpha) * pair.A - alpha * pair.B;
}

template <typename Real>
Herm2<Real> m_alpha(const CanonicalParams<Real>& p, Real alpha) {
  return m_alpha(p.pair(), alpha);
}

template <typename Real>
Herm2<Real> n_alpha(const CanonicalParams<Real>& p, Real alpha) {
  return n_alpha(p.pair(), alpha);
}

}  // namespace ncho
