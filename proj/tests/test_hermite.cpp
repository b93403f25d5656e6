#include <doctest.h>

#include <cmath>
#include <numbers>

#include "ncho/hermite.hpp"

using namespace ncho;

namespace {

// Unguarded recurrence in extended precision.
long double reference(int n, long double alpha, long double x) {
  const long double y = std::sqrt(alpha) * x;
  long double prev = 0;
  long double curr = std::pow(alpha, 0.25L) / std::pow(std::numbers::pi_v<long double>, 0.25L) * std::exp(-y * y / 2);
  for (int k = 0; k < n; ++k) {
    const long double next = std::sqrt(2.0L / (k + 1)) * y * curr - std::sqrt(static_cast<long double>(k) / (k + 1)) * prev;
    prev = curr;
    curr = next;
  }
  return curr;
}

}  // namespace

TEST_CASE("phi_0 at the origin is alpha^{1/4} pi^{-1/4}") {
  for (double alpha : {0.3, 1.0, 2.5}) {
    CHECK(hermite_eval(0, alpha, 0.0) == doctest::Approx(std::pow(alpha, 0.25) / std::pow(std::numbers::pi, 0.25)));
  }
}

TEST_CASE("low orders match the explicit polynomials") {
  const double alpha = 1.7;
  for (double x : {-1.3, 0.2, 0.9, 2.4}) {
    const double y = std::sqrt(alpha) * x;
    const double g = std::pow(alpha, 0.25) * std::exp(-y * y / 2) / std::sqrt(std::sqrt(std::numbers::pi));
    CHECK(hermite_eval(1, alpha, x) == doctest::Approx(g * 2 * y / std::sqrt(2.0)));
    CHECK(hermite_eval(2, alpha, x) == doctest::Approx(g * (4 * y * y - 2) / std::sqrt(8.0)));
    CHECK(hermite_eval(3, alpha, x) == doctest::Approx(g * (8 * y * y * y - 12 * y) / std::sqrt(48.0)));
  }
}

TEST_CASE("orthonormality by trapezoidal quadrature") {
  const double alpha = 0.8;
  const int n_max = 40;
  const int points = 6001;
  const double half = 20.0 / std::sqrt(alpha);
  const double h = 2 * half / (points - 1);
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(n_max + 1, n_max + 1);
  for (int i = 0; i < points; ++i) {
    const auto t = hermite_table(n_max, alpha, -half + h * i);
    gram += h * t.matrix() * t.matrix().transpose();
  }
  CHECK((gram - Eigen::MatrixXd::Identity(n_max + 1, n_max + 1)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("guarded evaluation far out matches extended precision") {
  for (double x : {31.0, 35.0, 45.0}) {
    const auto t = hermite_table(500, 1.0, x);
    for (int n : {0, 10, 100, 300, 500}) {
      const long double ref = reference(n, 1.0L, x);
      CHECK(std::isfinite(t(n)));
      if (std::abs(ref) > 1e-300L) {
        CHECK(std::abs(t(n) - double(ref)) <= 1e-10 * std::abs(double(ref)));
      } else {
        CHECK(std::abs(t(n)) < 1e-290);
      }
    }
  }
}

TEST_CASE("order and scale validation") {
  CHECK_THROWS_AS(hermite_table(501, 1.0, 0.0), Error);
  CHECK_THROWS_AS(hermite_table(-1, 1.0, 0.0), Error);
  CHECK_THROWS_AS(hermite_table(3, 0.0, 0.0), Error);
  CHECK(hermite_table(500, 1.0, 0.0).allFinite());
}
