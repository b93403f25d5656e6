#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <limits>
#include <type_traits>

#include "ncho/error.hpp"

namespace ncho {

/// Dense Hermitian (or real symmetric) eigensolver.
///
/// Householder reduction to tridiagonal form, a diagonal phase similarity that
/// makes the tridiagonal matrix real, then implicit-shift QL iterations with
/// Wilkinson-type shifts. Only the lower triangle of the input is read.
/// Eigenvalues are returned in ascending order.
template <typename MatrixType>
class HermitianEigenSolver {
 public:
  using Scalar = typename MatrixType::Scalar;
  using RealScalar = typename Eigen::NumTraits<Scalar>::Real;
  using RealVector = Eigen::Matrix<RealScalar, Eigen::Dynamic, 1>;
  using RealMatrix = Eigen::Matrix<RealScalar, Eigen::Dynamic, Eigen::Dynamic>;
  using VectorType = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using EigenvectorsType = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  /// Total QL iterations allowed per unit of dimension.
  static constexpr int kIterationsPerDim = 30;

  HermitianEigenSolver() = default;
  explicit HermitianEigenSolver(const MatrixType& m, int options = Eigen::ComputeEigenvectors) {
    compute(m, options);
  }

  HermitianEigenSolver& compute(const MatrixType& m, int options = Eigen::ComputeEigenvectors) {
    const Eigen::Index n = m.rows();
    if (m.cols() != n) throw Error(ErrorCode::InvalidArgument, "eigensolver needs a square matrix");
    const bool want_vectors = (options & Eigen::ComputeEigenvectors) != 0;
    has_vectors_ = want_vectors;
    iterations_ = 0;
    values_.resize(n);
    if (n == 0) {
      vectors_.resize(0, 0);
      return *this;
    }

    EigenvectorsType work = m;
    RealVector off(n);
    tridiagonalize(work, values_, off, want_vectors);
    ql_implicit(values_, off, want_vectors);
    if (want_vectors) vectors_ = basis_ * rotations_.template cast<Scalar>();
    sort_ascending(want_vectors);
    basis_.resize(0, 0);
    rotations_.resize(0, 0);
    return *this;
  }

  const RealVector& eigenvalues() const { return values_; }

  const EigenvectorsType& eigenvectors() const {
    if (!has_vectors_) throw Error(ErrorCode::InvalidArgument, "eigenvectors were not requested");
    return vectors_;
  }

  int iterations() const { return iterations_; }

 private:
  static constexpr bool kIsComplex = Eigen::NumTraits<Scalar>::IsComplex;

  // Reduces the Hermitian matrix in `a` (lower triangle) to real symmetric
  // tridiagonal form (diag, off) with a = basis_ · T · basis_^H.
  void tridiagonalize(EigenvectorsType& a, RealVector& diag, RealVector& off, bool want_vectors) {
    const Eigen::Index n = a.rows();
    VectorType sub(n);
    sub.setZero();
    RealVector h_store = RealVector::Zero(n);

    for (Eigen::Index j = 0; j + 2 < n; ++j) {
      const Eigen::Index m = n - j - 1;
      auto x = a.col(j).tail(m);
      const RealScalar tail_norm = x.tail(m - 1).norm();
      if (tail_norm == RealScalar(0)) {
        sub(j) = x(0);
        continue;
      }
      const RealScalar xnorm = x.norm();
      const Scalar phase = x(0) == Scalar(0) ? Scalar(1) : x(0) / RealScalar(std::abs(x(0)));
      x(0) += phase * xnorm;  // x now holds the reflector w
      const RealScalar h = x.squaredNorm() / RealScalar(2);
      h_store(j) = h;
      sub(j) = -phase * xnorm;

      auto trailing = a.bottomRightCorner(m, m);
      VectorType p = (trailing.template selfadjointView<Eigen::Lower>() * x) / h;
      const Scalar K = x.dot(p) / (RealScalar(2) * h);
      VectorType q = p - K * x;
      trailing.template selfadjointView<Eigen::Lower>().rankUpdate(x, q, Scalar(-1));
    }
    if (n >= 2) sub(n - 2) = a(n - 1, n - 2);
    for (Eigen::Index i = 0; i < n; ++i) diag(i) = std::real(a(i, i));

    // Phase similarity D so that D^H T D has a real non-negative subdiagonal.
    VectorType phases(n);
    phases(0) = Scalar(1);
    for (Eigen::Index i = 0; i + 1 < n; ++i) {
      const RealScalar mag = std::abs(sub(i));
      off(i) = mag;
      phases(i + 1) = mag == RealScalar(0) ? phases(i) : Scalar(phases(i) * (sub(i) / mag));
    }
    off(n - 1) = 0;

    if (!want_vectors) return;
    basis_ = EigenvectorsType::Identity(n, n);
    for (Eigen::Index j = n - 3; j >= 0; --j) {
      if (h_store(j) == RealScalar(0)) continue;
      const Eigen::Index m = n - j - 1;
      const auto w = a.col(j).tail(m);
      auto block = basis_.bottomRightCorner(m, m);
      const Eigen::Matrix<Scalar, 1, Eigen::Dynamic> wq = (w.adjoint() * block) / h_store(j);
      block.noalias() -= w * wq;
    }
    basis_ = basis_ * phases.asDiagonal();
    rotations_ = RealMatrix::Identity(n, n);
  }

  void ql_implicit(RealVector& d, RealVector& e, bool want_vectors) {
    using std::abs;
    const Eigen::Index n = d.size();
    const RealScalar eps = std::numeric_limits<RealScalar>::epsilon();
    const int cap = kIterationsPerDim * static_cast<int>(n);

    for (Eigen::Index l = 0; l < n; ++l) {
      Eigen::Index m;
      do {
        for (m = l; m + 1 < n; ++m) {
          const RealScalar dd = abs(d(m)) + abs(d(m + 1));
          if (abs(e(m)) <= eps * dd) break;
        }
        if (m == l) break;
        if (++iterations_ > cap) {
          throw Error(ErrorCode::ConvergenceFailure, "QL iteration cap exceeded");
        }
        RealScalar g = (d(l + 1) - d(l)) / (RealScalar(2) * e(l));
        RealScalar r = std::hypot(g, RealScalar(1));
        g = d(m) - d(l) + e(l) / (g + std::copysign(r, g));
        RealScalar s = 1, c = 1, p = 0;
        Eigen::Index i;
        bool underflow = false;
        for (i = m - 1; i >= l; --i) {
          RealScalar f = s * e(i);
          const RealScalar b = c * e(i);
          r = std::hypot(f, g);
          e(i + 1) = r;
          if (r == RealScalar(0)) {
            d(i + 1) -= p;
            e(m) = 0;
            underflow = true;
            break;
          }
          s = f / r;
          c = g / r;
          g = d(i + 1) - p;
          r = (d(i) - g) * s + RealScalar(2) * c * b;
          p = s * r;
          d(i + 1) = g + p;
          g = c * r - b;
          if (want_vectors) {
            auto zi = rotations_.col(i);
            auto zi1 = rotations_.col(i + 1);
            for (Eigen::Index k = 0; k < n; ++k) {
              f = zi1(k);
              zi1(k) = s * zi(k) + c * f;
              zi(k) = c * zi(k) - s * f;
            }
          }
        }
        if (underflow) continue;
        d(l) -= p;
        e(l) = g;
        e(m) = 0;
      } while (m != l);
    }
  }

  void sort_ascending(bool want_vectors) {
    const Eigen::Index n = values_.size();
    for (Eigen::Index i = 0; i + 1 < n; ++i) {
      Eigen::Index k;
      values_.tail(n - i).minCoeff(&k);
      k += i;
      if (k != i) {
        std::swap(values_(i), values_(k));
        if (want_vectors) vectors_.col(i).swap(vectors_.col(k));
      }
    }
  }

  RealVector values_;
  EigenvectorsType vectors_;
  EigenvectorsType basis_;
  RealMatrix rotations_;
  bool has_vectors_ = false;
  int iterations_ = 0;
};

}  // namespace ncho
