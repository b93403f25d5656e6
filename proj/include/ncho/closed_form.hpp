#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <string_view>

#include "ncho/error.hpp"
#include "ncho/hermitian_eigensolver.hpp"
#include "ncho/matrix_core.hpp"
#include "ncho/sector_operator.hpp"

namespace ncho {

/// Which root of det(A − β²B) = 0: Plus takes the larger β², Minus the smaller.
enum class RootSign { Plus, Minus };

constexpr std::string_view to_string(RootSign s) { return s == RootSign::Plus ? "plus" : "minus"; }

template <typename Real = double>
struct BetaRoot {
  RootSign sign = RootSign::Plus;
  Real beta = 0;
  Vec2<Real> kernel_u2;     // spans ker(A − β²B)
  Vec2<Real> cokernel_u2t;  // orthogonal complement, eigenvalue `defect`
  Real defect = 0;          // a + c − (1 + b) β²
};

template <typename Real = double>
struct BetaRoots {
  BetaRoot<Real> plus;
  BetaRoot<Real> minus;
  bool degenerate = false;   // discriminant (c − ab)² + 4|ξ|²b vanishes: roots collide
  bool commutative = false;  // b = 1 or ξ = 0

  const BetaRoot<Real>& operator[](RootSign s) const { return s == RootSign::Plus ? plus : minus; }
};

namespace detail {

template <typename Real>
BetaRoot<Real> make_root(const CanonicalParams<Real>& p, RootSign sign, Real beta_sq) {
  BetaRoot<Real> r;
  r.sign = sign;
  r.beta = std::sqrt(beta_sq);
  r.defect = p.a + p.c - (Real(1) + p.b) * beta_sq;

  const Complex<Real> xi_bar = std::conj(p.xi);
  // Two expressions for the kernel (one from each row of A − β²B); they agree
  // up to scale whenever ξ ≠ 0. The first is canonical, the second only
  // takes over at commutative points where the first vanishes.
  const Vec2<Real> from_row0(p.c - beta_sq * p.b, -xi_bar);
  const Vec2<Real> from_row1(-p.xi, p.a - beta_sq);
  const Real scale = p.a + p.c + p.b * beta_sq;
  if (from_row0.norm() > Real(1e-12) * scale || from_row0.norm() >= from_row1.norm()) {
    r.kernel_u2 = from_row0;
  } else {
    r.kernel_u2 = from_row1;
  }
  const Vec2<Real> complement(p.a - beta_sq, xi_bar);
  if (complement.norm() > Real(1e-12) * scale) {
    r.cokernel_u2t = complement;
  } else {
    r.cokernel_u2t = Vec2<Real>(-std::conj(r.kernel_u2(1)), std::conj(r.kernel_u2(0)));
  }
  return r;
}

}  // namespace detail

/// β² = (ab + c ± sqrt((c − ab)² + 4|ξ|²b)) / (2b), the two eigenvalues of
/// B^{-1/2} A B^{-1/2}. The smaller root is taken from the product of roots
/// (ac − |ξ|²)/b to avoid cancellation.
template <typename Real>
BetaRoots<Real> beta_roots(const CanonicalParams<Real>& p) {
  const Real xi2 = std::norm(p.xi);
  const Real sum = p.a * p.b + p.c;
  const Real disc = (p.c - p.a * p.b) * (p.c - p.a * p.b) + Real(4) * xi2 * p.b;
  const Real plus_sq = (sum + std::sqrt(disc)) / (Real(2) * p.b);
  const Real minus_sq = (p.a * p.c - xi2) / (p.b * plus_sq);

  BetaRoots<Real> roots;
  roots.plus = detail::make_root(p, RootSign::Plus, plus_sq);
  roots.minus = detail::make_root(p, RootSign::Minus, minus_sq);
  roots.degenerate = disc < Real(1e-14) * sum * sum;
  roots.commutative = p.commutative();
  return roots;
}

/// Numerator weights of λ = w β (ab + c − 2β²b) / (a + c − (b+1)β²).
template <typename Real>
constexpr Real lambda_weight(Parity parity) {
  return parity == Parity::Even ? Real(5) : Real(7);
}

template <typename Real>
bool singular_defect(const CanonicalParams<Real>& p, const BetaRoot<Real>& root) {
  const Real beta_sq = root.beta * root.beta;
  return std::abs(root.defect) <= Real(1e-12) * (p.a + p.c + (Real(1) + p.b) * beta_sq);
}

template <typename Real>
Real lambda_for(const CanonicalParams<Real>& p, const BetaRoot<Real>& root, Parity parity) {
  if (singular_defect(p, root)) {
    throw Error(ErrorCode::SingularDenominator, "a + c − (b+1)β² vanishes at this root");
  }
  const Real beta = root.beta;
  return lambda_weight<Real>(parity) * beta * (p.a * p.b + p.c - Real(2) * beta * beta * p.b) / root.defect;
}

template <typename Real>
Real lambda_even(const CanonicalParams<Real>& p, const BetaRoot<Real>& root) {
  return lambda_for(p, root, Parity::Even);
}

template <typename Real>
Real lambda_odd(const CanonicalParams<Real>& p, const BetaRoot<Real>& root) {
  return lambda_for(p, root, Parity::Odd);
}

/// Membership condition for a four-term eigenfunction at one root:
///   even: 2λD = 5β(λ − β)(λ − βb),   odd: 6λD = 7β(λ − 3β)(λ − 3βb),
/// with D the defect and λ = λ_even / λ_odd. `residual` is LHS − RHS and
/// `scale` is |LHS| + |RHS|, so residual/scale is invariant under
/// (a, c, |ξ|) → r(a, c, |ξ|) while residual itself scales as r^{3/2}.
template <typename Real = double>
struct Membership {
  Real residual = std::numeric_limits<Real>::quiet_NaN();
  Real scale = std::numeric_limits<Real>::quiet_NaN();
  Real lambda = std::numeric_limits<Real>::quiet_NaN();
  Real beta = 0;
  bool singular = false;

  Real relative() const { return residual / scale; }
};

/// Never throws on a vanishing defect; reports it through `singular`.
template <typename Real>
Membership<Real> membership(const CanonicalParams<Real>& p, RootSign sign, Parity parity) {
  const auto roots = beta_roots(p);
  const BetaRoot<Real>& root = roots[sign];
  Membership<Real> m;
  m.beta = root.beta;
  if (singular_defect(p, root)) {
    m.singular = true;
    return m;
  }
  const Real beta = root.beta;
  const Real base = p.a * p.b + p.c - Real(2) * beta * beta * p.b;
  const Real w = lambda_weight<Real>(parity);
  const Real shift = parity == Parity::Even ? Real(1) : Real(3);
  const Real lambda = w * beta * base / root.defect;
  // 2λD (even) or 6λD (odd), written without the division.
  const Real lhs = Real(2) * shift * w * beta * base;
  const Real rhs = w * beta * (lambda - shift * beta) * (lambda - shift * beta * p.b);
  m.lambda = lambda;
  m.residual = lhs - rhs;
  m.scale = std::abs(lhs) + std::abs(rhs);
  return m;
}

template <typename Real>
Real residual_even(const CanonicalParams<Real>& p, RootSign sign) {
  const auto m = membership(p, sign, Parity::Even);
  if (m.singular) throw Error(ErrorCode::SingularDenominator, "a + c − (b+1)β² vanishes at this root");
  return m.residual;
}

template <typename Real>
Real residual_odd(const CanonicalParams<Real>& p, RootSign sign) {
  const auto m = membership(p, sign, Parity::Odd);
  if (m.singular) throw Error(ErrorCode::SingularDenominator, "a + c − (b+1)β² vanishes at this root");
  return m.residual;
}

/// Eigenvalues of the leading diagonal block of the stored sector operator at
/// scale β: M_β/2 (even) or 3M_β/2 (odd). A four-term eigenvalue is one of
/// these, i.e. 2λ ∈ Spec(M_β) or 2λ ∈ Spec(3M_β).
template <typename Real>
std::array<Real, 2> leading_block_spectrum(const CanonicalParams<Real>& p, Real beta, Parity parity) {
  const Real weight = parity == Parity::Even ? Real(0.5) : Real(1.5);
  const auto e = eig2(m_alpha(p, beta));
  return {weight * e.values[0], weight * e.values[1]};
}

template <typename Real = double>
struct ClosedFormSolution {
  Parity parity = Parity::Even;
  BetaRoot<Real> beta_root;
  Real lambda = 0;
  Complex<Real> gamma;        // bottom polynomial block = γ u₂ + γ̃ ũ₂
  Complex<Real> gamma_tilde;
  CoeffVector<Real> coeffs;   // Hermite blocks (v0, v2) or (v1, v3) at α = β
  Real residual_membership = 0;
  Real membership_scale = 0;
  Real consistency = 0;       // relative mismatch between the two determinations of γ̃
  Real residual_eigen = 0;    // ‖H±Φ − λΦ‖ / ‖Φ‖ in coefficient space

  Real alpha() const { return beta_root.beta; }
};

/// ‖H±v − λv‖ / ‖v‖ evaluated with the exact matrix-free action.
template <typename Real>
Real eigen_residual(const HermitianPair<Real>& pair, Real alpha, const CoeffVector<Real>& v, Real lambda) {
  const auto hv = apply_operator(v, pair, alpha, v.parity);
  CVector<Real> diff = hv.coeffs;
  diff.head(v.coeffs.size()) -= lambda * v.coeffs;
  return diff.norm() / v.coeffs.norm();
}

template <typename Real>
Real verify_eigenpair(const ClosedFormSolution<Real>& sol, const CanonicalParams<Real>& p) {
  return eigen_residual(p.pair(), sol.alpha(), sol.coeffs, sol.lambda);
}

inline constexpr double kDefaultMembershipTol = 1e-8;
inline constexpr double kConsistencyTol = 1e-8;

/// Four-term eigenfunction Φ = (u_b + u_t x²) e^{−βx²/2} (even) or
/// (u_b x + u_t x³) e^{−βx²/2} (odd) on the Ω manifold of the given sign.
///
/// Collecting powers of x in (H − λ)Φ = 0 gives, with (k, j, m) = (5, 1, 2)
/// for even and (7, 3, 6) for odd,
///   (A − β²B) u_t = 0,
///   (A − β²B) u_b + (kβB − λ) u_t = 0,
///   (jβB − λ) u_b − m B u_t = 0.
/// u_t is the kernel vector; u_b = γ u₂ + γ̃ ũ₂ is solved from the last
/// equation and checked against γ̃ D = kβb − λ from the middle one.
template <typename Real>
ClosedFormSolution<Real> construct_phi(const CanonicalParams<Real>& p, RootSign sign, Parity parity,
                                       Real tol = Real(kDefaultMembershipTol)) {
  using std::sqrt;
  if (p.commutative()) {
    throw Error(ErrorCode::OffManifold, "four-term construction needs b > 1 and xi != 0");
  }
  const auto roots = beta_roots(p);
  const BetaRoot<Real>& root = roots[sign];
  const auto m = membership(p, sign, parity);
  if (m.singular) throw Error(ErrorCode::SingularDenominator, "a + c − (b+1)β² vanishes at this root");
  if (!(std::abs(m.residual) <= tol * m.scale)) {
    throw Error(ErrorCode::OffManifold, "membership residual " + std::to_string(m.relative()) +
                                            " (relative) exceeds tolerance " + std::to_string(tol));
  }
  const Real beta = root.beta;
  const Real beta_sq = beta * beta;
  if (std::abs(p.a - beta_sq) <= Real(1e-14) * (p.a + beta_sq)) {
    throw Error(ErrorCode::OffManifold, "a = beta^2: complement vector degenerates to (0, xi)");
  }
  const Real lambda = m.lambda;
  const bool even = parity == Parity::Even;
  const Real k = even ? Real(5) : Real(7);
  const Real j = even ? Real(1) : Real(3);
  const Real mult = even ? Real(2) : Real(6);

  const Vec2<Real>& u = root.kernel_u2;
  const Vec2<Real>& ut = root.cokernel_u2t;
  const Herm2<Real> B = p.B();
  const Herm2<Real> shifted = j * beta * B - Herm2<Real>(lambda, lambda);

  Mat2<Real> system;
  system.col(0) = shifted * u;
  system.col(1) = shifted * ut;
  const Vec2<Real> rhs = mult * (B * u);
  const Real det_abs = std::abs(system.determinant());
  if (!(det_abs > Real(1e-14) * system.squaredNorm())) {
    throw Error(ErrorCode::InconsistentSystem, "lambda coincides with an eigenvalue of j*beta*B");
  }
  const Vec2<Real> gammas = system.partialPivLu().solve(rhs);

  ClosedFormSolution<Real> sol;
  sol.parity = parity;
  sol.beta_root = root;
  sol.lambda = lambda;
  sol.gamma = gammas(0);
  sol.gamma_tilde = gammas(1);
  sol.residual_membership = m.residual;
  sol.membership_scale = m.scale;

  const Complex<Real> expected = (k * beta * p.b - lambda) / root.defect;
  sol.consistency = std::abs(sol.gamma_tilde - expected) / std::abs(expected);
  if (!(sol.consistency <= Real(kConsistencyTol))) {
    throw Error(ErrorCode::InconsistentSystem,
                "gamma_tilde from the two equations disagrees by " + std::to_string(sol.consistency));
  }

  // Polynomial blocks to Hermite coefficients at scale β, normalized so the
  // top Hermite block equals the kernel vector u₂.
  const Vec2<Real> u_bottom = sol.gamma * u + sol.gamma_tilde * ut;
  const Real root_pi = sqrt(std::numbers::pi_v<Real>);
  const Real quarter = sqrt(sqrt(beta));
  Vec2<Real> v_bottom;
  if (even) {
    // (u_b + u_t x²) g = (u_b + u_t/(2β)) g + u_t/(4β) (4y² − 2) g, y = √β x.
    const Real n0 = quarter / sqrt(root_pi);
    const Real n2 = quarter / sqrt(Real(8) * root_pi);
    const Real top_scale = Real(1) / (Real(4) * beta * n2);
    v_bottom = (u_bottom + u / (Real(2) * beta)) / n0 / top_scale;
  } else {
    // (u_b x + u_t x³) g = [u_b/(2√β) + 3u_t/(4β^{3/2})] (2y) g + u_t/(8β^{3/2}) (8y³ − 12y) g.
    const Real n1 = quarter / sqrt(Real(2) * root_pi);
    const Real n3 = quarter / sqrt(Real(48) * root_pi);
    const Real b32 = beta * sqrt(beta);
    const Real top_scale = Real(1) / (Real(8) * b32 * n3);
    v_bottom = (u_bottom / (Real(2) * sqrt(beta)) + Real(3) * u / (Real(4) * b32)) / n1 / top_scale;
  }
  sol.coeffs = CoeffVector<Real>::zeros(parity, 2);
  sol.coeffs.block(0) = v_bottom;
  sol.coeffs.block(1) = u;
  sol.residual_eigen = verify_eigenpair(sol, p);
  return sol;
}

/// Smallest residual ‖H±Φ − θΦ‖/‖Φ‖ over the Ritz pairs (θ, Φ) of H±
/// compressed to the first two blocks at scale α. Vanishes iff the sector has
/// a four-term eigenfunction at this α (an exact eigenvector inside the
/// subspace is always a Ritz vector of the compression).
template <typename Real>
Real four_term_defect(const HermitianPair<Real>& pair, Real alpha, Parity parity) {
  const auto op = assemble_sector(pair, alpha, parity, 2);
  HermitianEigenSolver<CMatrix<Real>> ritz(op.storage);
  Real best = std::numeric_limits<Real>::infinity();
  for (int i = 0; i < 4; ++i) {
    CoeffVector<Real> v(parity, ritz.eigenvectors().col(i));
    best = std::min(best, eigen_residual(pair, alpha, v, ritz.eigenvalues()(i)));
  }
  return best;
}

}  // namespace ncho
