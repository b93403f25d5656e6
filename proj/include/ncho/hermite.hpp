#pragma once

#include <Eigen/Core>

#include <cmath>
#include <numbers>
#include <vector>

#include "ncho/error.hpp"

namespace ncho {

inline constexpr int kMaxHermiteOrder = 500;

/// Values φ_0^α(x), ..., φ_{n_max}^α(x) of the orthonormal Hermite functions
///   φ_n^α(x) = α^{1/4} h_n(√α x) e^{-α x²/2} / sqrt(2^n n! √π).
///
/// Upward recurrence on the normalized functions. For |√α x| > 30 the
/// Gaussian factor is kept in log form and the recurrence is rescaled on the
/// fly so that neither e^{-y²/2} nor the polynomial part leaves the range of
/// Real before they are recombined.
template <typename Real = double>
Eigen::Array<Real, Eigen::Dynamic, 1> hermite_table(int n_max, Real alpha, Real x) {
  using std::exp;
  using std::log;
  using std::sqrt;
  if (n_max < 0 || n_max > kMaxHermiteOrder) {
    throw Error(ErrorCode::InvalidArgument, "Hermite order outside [0, 500]");
  }
  if (!(alpha > Real(0))) throw Error(ErrorCode::NonPositiveAlpha, "alpha must be positive");

  const Real y = sqrt(alpha) * x;
  const Real prefactor = sqrt(sqrt(alpha)) / sqrt(sqrt(std::numbers::pi_v<Real>));
  Eigen::Array<Real, Eigen::Dynamic, 1> out(n_max + 1);

  const bool guarded = std::abs(y) > Real(30);
  Real log_scale = guarded ? -y * y / Real(2) : Real(0);
  Real p_prev = 0;
  Real p_curr = guarded ? prefactor : prefactor * exp(-y * y / Real(2));

  auto emit = [&](int n, Real value) {
    out(n) = guarded ? value * exp(log_scale) : value;
  };
  emit(0, p_curr);
  for (int n = 0; n < n_max; ++n) {
    const Real next = sqrt(Real(2) / Real(n + 1)) * y * p_curr - sqrt(Real(n) / Real(n + 1)) * p_prev;
    p_prev = p_curr;
    p_curr = next;
    if (guarded) {
      const Real mag = std::abs(p_curr);
      if (mag > Real(1e100)) {
        p_prev /= mag;
        p_curr /= mag;
        log_scale += log(mag);
      }
    }
    emit(n + 1, p_curr);
  }
  return out;
}

template <typename Real = double>
Real hermite_eval(int n, Real alpha, Real x) {
  if (n < 0 || n > kMaxHermiteOrder) {
    throw Error(ErrorCode::InvalidArgument, "Hermite order outside [0, 500]");
  }
  return hermite_table<Real>(n, alpha, x)(n);
}

}  // namespace ncho
