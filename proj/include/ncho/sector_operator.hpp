#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <ostream>
#include <span>
#include <string_view>
#include <vector>

#include "ncho/error.hpp"
#include "ncho/hermite.hpp"
#include "ncho/matrix_core.hpp"

namespace ncho {

/// Even sector: span of φ_{2k}; odd sector: span of φ_{2k+1}.
enum class Parity { Even, Odd };

constexpr int parity_offset(Parity p) { return p == Parity::Even ? 0 : 1; }
constexpr std::string_view to_string(Parity p) { return p == Parity::Even ? "even" : "odd"; }

template <typename Real = double>
using CMatrix = Eigen::Matrix<Complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Real = double>
using CVector = Eigen::Matrix<Complex<Real>, Eigen::Dynamic, 1>;

/// Hermite coefficient blocks v_k ∈ C² of a vector in one parity sector,
/// stacked as (v_0, v_1, ...) into a single vector of length 2·n_blocks.
template <typename Real = double>
struct CoeffVector {
  Parity parity = Parity::Even;
  CVector<Real> coeffs;

  CoeffVector() = default;
  CoeffVector(Parity p, CVector<Real> c) : parity(p), coeffs(std::move(c)) {}
  static CoeffVector zeros(Parity p, int n_blocks) { return {p, CVector<Real>::Zero(2 * n_blocks)}; }

  int n_blocks() const { return static_cast<int>(coeffs.size() / 2); }
  auto block(int k) { return coeffs.template segment<2>(2 * k); }
  auto block(int k) const { return coeffs.template segment<2>(2 * k); }

  /// Hermite index of block k.
  int hermite_index(int k) const { return 2 * k + parity_offset(parity); }

  /// Squared ℓ² mass of all blocks with index >= first_block.
  Real tail_mass(int first_block) const {
    if (first_block >= n_blocks()) return Real(0);
    return coeffs.tail(coeffs.size() - 2 * first_block).squaredNorm();
  }
};

/// Leading 2N×2N principal submatrix of H± in the basis {w φ_{2k+offset}^α}.
/// Diagonal block k is (2n+1) M_α / 2 and the coupling between blocks k and
/// k+1 is sqrt((n+1)(n+2)) N_α / 2, with n = 2k + offset. This is the block
/// tridiagonal matrix of 2H± divided by two, so its eigenvalues are those of H.
template <typename Real = double>
struct SectorOperator {
  HermitianPair<Real> pair;
  Real alpha = 1;
  Parity parity = Parity::Even;
  int n_blocks = 0;
  CMatrix<Real> storage;

  int dim() const { return 2 * n_blocks; }
};

namespace detail {

template <typename Real>
Real diagonal_weight(int n) {
  return Real(2 * n + 1) / Real(2);
}

template <typename Real>
Real coupling_weight(int n) {
  return std::sqrt(Real(n + 1) * Real(n + 2)) / Real(2);
}

template <typename Real>
void require_blocks(int n) {
  if (n < 1) throw Error(ErrorCode::ZeroDimension, "number of blocks must be at least 1");
}

}  // namespace detail

template <typename Real>
SectorOperator<Real> assemble_sector(const HermitianPair<Real>& pair, Real alpha, Parity parity, int n_blocks) {
  require_positive_alpha(alpha);
  detail::require_blocks<Real>(n_blocks);
  const Mat2<Real> M = m_alpha(pair, alpha).matrix();
  const Mat2<Real> N = n_alpha(pair, alpha).matrix();
  const int off = parity_offset(parity);

  SectorOperator<Real> op{pair, alpha, parity, n_blocks, CMatrix<Real>::Zero(2 * n_blocks, 2 * n_blocks)};
  for (int k = 0; k < n_blocks; ++k) {
    const int n = 2 * k + off;
    op.storage.template block<2, 2>(2 * k, 2 * k) = detail::diagonal_weight<Real>(n) * M;
    if (k + 1 < n_blocks) {
      const Mat2<Real> T = detail::coupling_weight<Real>(n) * N;
      op.storage.template block<2, 2>(2 * k, 2 * k + 2) = T;
      op.storage.template block<2, 2>(2 * k + 2, 2 * k) = T.adjoint();
    }
  }
  return op;
}

template <typename Real>
SectorOperator<Real> assemble_sector(const CanonicalParams<Real>& p, Real alpha, Parity parity, int n_blocks) {
  return assemble_sector(p.pair(), alpha, parity, n_blocks);
}

/// Matrix-free action of H± on a finitely supported coefficient sequence.
/// The result has one more block than the input, which is exact: the operator
/// couples each block only to its neighbours.
template <typename Real>
CoeffVector<Real> apply_operator(const CoeffVector<Real>& v, const HermitianPair<Real>& pair, Real alpha,
                                 Parity parity) {
  if (v.parity != parity) throw Error(ErrorCode::ParityMismatch, "coefficient vector has the other parity");
  require_positive_alpha(alpha);
  const Herm2<Real> M = m_alpha(pair, alpha);
  const Herm2<Real> N = n_alpha(pair, alpha);
  const int len = v.n_blocks();
  const int off = parity_offset(parity);

  auto out = CoeffVector<Real>::zeros(parity, len + 1);
  for (int k = 0; k < len; ++k) {
    const int n = 2 * k + off;
    const Vec2<Real> vk = v.block(k);
    out.block(k) += detail::diagonal_weight<Real>(n) * (M * vk);
    const Vec2<Real> coupled = detail::coupling_weight<Real>(n) * (N * vk);
    out.block(k + 1) += coupled;
    if (k > 0) out.block(k - 1) += detail::coupling_weight<Real>(n - 2) * (N * vk);
  }
  return out;
}

template <typename Real>
CoeffVector<Real> apply_operator(const CoeffVector<Real>& v, const CanonicalParams<Real>& p, Real alpha,
                                 Parity parity) {
  return apply_operator(v, p.pair(), alpha, parity);
}

/// Two component functions of Σ_k v_k φ_{2k+offset}^α on a grid.
template <typename Real = double>
struct RealSpaceField {
  std::vector<Real> x;
  Eigen::Array<Complex<Real>, Eigen::Dynamic, 1> upper;
  Eigen::Array<Complex<Real>, Eigen::Dynamic, 1> lower;
};

template <typename Real>
RealSpaceField<Real> reconstruct(const CoeffVector<Real>& v, Real alpha, Parity parity, std::span<const Real> xs) {
  if (v.parity != parity) throw Error(ErrorCode::ParityMismatch, "coefficient vector has the other parity");
  const int len = v.n_blocks();
  const int n_max = len == 0 ? 0 : 2 * (len - 1) + parity_offset(parity);
  RealSpaceField<Real> field{std::vector<Real>(xs.begin(), xs.end()),
                             Eigen::Array<Complex<Real>, Eigen::Dynamic, 1>::Zero(xs.size()),
                             Eigen::Array<Complex<Real>, Eigen::Dynamic, 1>::Zero(xs.size())};
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const auto table = hermite_table<Real>(n_max, alpha, xs[i]);
    for (int k = 0; k < len; ++k) {
      const Real phi = table(v.hermite_index(k));
      field.upper(i) += v.block(k)(0) * phi;
      field.lower(i) += v.block(k)(1) * phi;
    }
  }
  return field;
}

/// Uniform grid of half-width 20/√α used for real-space checks.
template <typename Real = double>
std::vector<Real> default_grid(Real alpha, int points = 4001) {
  const Real half = Real(20) / std::sqrt(alpha);
  std::vector<Real> xs(points);
  for (int i = 0; i < points; ++i) xs[i] = -half + Real(2) * half * Real(i) / Real(points - 1);
  return xs;
}

/// Row-major CSV dump of the stored matrix, complex entries as "re+imj".
template <typename Real>
void write_csv(std::ostream& os, const SectorOperator<Real>& op) {
  const auto old_precision = os.precision(17);
  for (int i = 0; i < op.dim(); ++i) {
    for (int j = 0; j < op.dim(); ++j) {
      const auto z = op.storage(i, j);
      if (j > 0) os << ',';
      os << z.real() << (z.imag() < 0 || std::signbit(z.imag()) ? "-" : "+") << std::abs(z.imag()) << 'j';
    }
    os << '\n';
  }
  os.precision(old_precision);
}

}  // namespace ncho
