#include <doctest.h>

#include <random>
#include <sstream>

#include "ncho/closed_form.hpp"
#include "ncho/sector_operator.hpp"

using namespace ncho;
using C = std::complex<double>;

namespace {

CoeffVector<double> random_coeffs(std::mt19937& rng, Parity parity, int n_blocks) {
  std::normal_distribution<double> g;
  auto v = CoeffVector<double>::zeros(parity, n_blocks);
  for (Eigen::Index i = 0; i < v.coeffs.size(); ++i) v.coeffs(i) = C(g(rng), g(rng));
  return v;
}

CanonicalParams<double> random_params(std::mt19937& rng) {
  std::uniform_real_distribution<double> u(0.2, 3.0);
  const double a = u(rng);
  const double c = u(rng);
  const double mag = std::sqrt(a * c) * std::uniform_real_distribution<double>(0.0, 0.95)(rng);
  const double phase = std::uniform_real_distribution<double>(0.0, 6.28)(rng);
  return CanonicalParams<double>::from_tetrad(1.0 + 5.0 * u(rng), a, c, std::polar(mag, phase));
}

}  // namespace

TEST_CASE("identity pair, even, one and two blocks") {
  const auto p = CanonicalParams<double>::from_tetrad(1.0, 1.0, 1.0, C(0.0));
  const auto op1 = assemble_sector(p, 1.0, Parity::Even, 1);
  CHECK(op1.storage.isApprox(CMatrix<double>::Identity(2, 2)));

  const auto op2 = assemble_sector(p, 1.0, Parity::Even, 2);
  HermitianEigenSolver<CMatrix<double>> es(op2.storage, Eigen::EigenvaluesOnly);
  CHECK(es.eigenvalues()(0) == doctest::Approx(1.0));
  CHECK(es.eigenvalues()(1) == doctest::Approx(1.0));
  CHECK(es.eigenvalues()(2) == doctest::Approx(5.0));
  CHECK(es.eigenvalues()(3) == doctest::Approx(5.0));
}

TEST_CASE("odd sector, two blocks, hand arithmetic for (b,a,c,xi) = (4,1,2,1)") {
  const auto p = CanonicalParams<double>::from_tetrad(4.0, 1.0, 2.0, C(1.0));
  const auto op = assemble_sector(p, 1.0, Parity::Odd, 2);
  // M_1 = [[2, 1], [1, 6]], N_1 = [[0, 1], [1, -2]].
  CHECK(op.storage(0, 0) == C(1.5 * 2.0));
  CHECK(op.storage(1, 1) == C(1.5 * 6.0));
  CHECK(op.storage(0, 1) == C(1.5));
  CHECK(op.storage(2, 2) == C(3.5 * 2.0));
  const double w = std::sqrt(6.0) / 2.0;
  CHECK(op.storage(0, 2) == C(0.0));
  CHECK(op.storage(0, 3).real() == doctest::Approx(w));
  CHECK(op.storage(1, 3).real() == doctest::Approx(-2.0 * w));

  // Cross-check against the matrix-free action on unit vectors.
  for (int j = 0; j < 4; ++j) {
    auto e = CoeffVector<double>::zeros(Parity::Odd, 2);
    e.coeffs(j) = 1.0;
    const auto he = apply_operator(e, p, 1.0, Parity::Odd);
    CHECK((he.coeffs.head(4) - op.storage.col(j)).norm() < 1e-15);
  }
}

TEST_CASE("assembly is Hermitian and consistent across truncations") {
  std::mt19937 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const auto p = random_params(rng);
    const double alpha = std::uniform_real_distribution<double>(0.3, 2.0)(rng);
    for (Parity parity : {Parity::Even, Parity::Odd}) {
      const auto big = assemble_sector(p, alpha, parity, 30);
      CHECK(big.storage == big.storage.adjoint());
      const auto small = assemble_sector(p, alpha, parity, 17);
      CHECK(big.storage.topLeftCorner(34, 34) == small.storage);
    }
  }
}

TEST_CASE("matrix-free action equals dense multiplication") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const auto p = random_params(rng);
    const double alpha = std::uniform_real_distribution<double>(0.3, 2.0)(rng);
    const Parity parity = trial % 2 ? Parity::Odd : Parity::Even;
    const int len = 1 + trial * 4;
    const auto v = random_coeffs(rng, parity, len);
    const auto hv = apply_operator(v, p, alpha, parity);
    CHECK(hv.n_blocks() == len + 1);
    const auto op = assemble_sector(p, alpha, parity, len + 1);
    CVector<double> padded = CVector<double>::Zero(2 * (len + 1));
    padded.head(2 * len) = v.coeffs;
    const CVector<double> dense = op.storage * padded;
    CHECK((dense - hv.coeffs).norm() <= 1e-13 * dense.norm());
  }
}

TEST_CASE("kernel vector of N_alpha is not coupled") {
  // A = diag(2, 8), B = diag(2, 2): alpha = 1 gives N_1 = diag(0, 6).
  const auto pair = validate_pair(Herm2<double>::diagonal(2.0, 8.0), Herm2<double>::diagonal(2.0, 2.0));
  auto v = CoeffVector<double>::zeros(Parity::Even, 1);
  v.coeffs << 1.0, 0.0;
  const auto hv = apply_operator(v, pair, 1.0, Parity::Even);
  CHECK(hv.block(0)(0) == C(0.5 * 4.0));
  CHECK(std::abs(hv.block(1)(0)) == 0.0);
  CHECK(std::abs(hv.block(1)(1)) == 0.0);
}

TEST_CASE("commutative pair acts diagonally at its own scale") {
  const double a1 = 2.0, b1 = 0.5, a2 = 3.0, b2 = 1.5;
  const auto pair = validate_pair(Herm2<double>::diagonal(a1, a2), Herm2<double>::diagonal(b1, b2));
  for (int j = 0; j < 2; ++j) {
    const double a = j == 0 ? a1 : a2;
    const double b = j == 0 ? b1 : b2;
    const double alpha = std::sqrt(a / b);
    for (Parity parity : {Parity::Even, Parity::Odd}) {
      for (int k = 0; k < 4; ++k) {
        auto e = CoeffVector<double>::zeros(parity, k + 1);
        e.coeffs(2 * k + j) = 1.0;
        const auto he = apply_operator(e, pair, alpha, parity);
        const int n = 2 * k + parity_offset(parity);
        CVector<double> expected = CVector<double>::Zero(he.coeffs.size());
        expected(2 * k + j) = std::sqrt(a * b) * (2 * n + 1);
        CHECK((he.coeffs - expected).norm() < 1e-13);
      }
    }
  }
}

TEST_CASE("input validation") {
  const auto p = CanonicalParams<double>::from_tetrad(2.0, 1.0, 1.0, C(0.5));
  CHECK_THROWS_AS(assemble_sector(p, -1.0, Parity::Even, 3), Error);
  CHECK_THROWS_AS(assemble_sector(p, 1.0, Parity::Even, 0), Error);
  const auto v = CoeffVector<double>::zeros(Parity::Odd, 2);
  try {
    apply_operator(v, p, 1.0, Parity::Even);
    FAIL("expected ParityMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ParityMismatch);
  }
}

TEST_CASE("reconstruct: unit vector gives phi_0 in the upper component") {
  auto v = CoeffVector<double>::zeros(Parity::Even, 1);
  v.coeffs << 1.0, 0.0;
  const std::vector<double> xs{-1.0, 0.0, 0.5};
  const auto f = reconstruct(v, 0.7, Parity::Even, std::span<const double>(xs));
  for (std::size_t i = 0; i < xs.size(); ++i) {
    CHECK(f.upper(i).real() == doctest::Approx(hermite_eval(0, 0.7, xs[i])));
    CHECK(f.lower(i) == C(0.0));
  }
}

TEST_CASE("Parseval: grid norm equals coefficient norm") {
  std::mt19937 rng(5);
  const double alpha = 0.9;
  const auto v = random_coeffs(rng, Parity::Odd, 8);
  const auto xs = default_grid(alpha);
  const auto f = reconstruct(v, alpha, Parity::Odd, std::span<const double>(xs));
  const double h = xs[1] - xs[0];
  const double grid_norm = h * (f.upper.abs2().sum() + f.lower.abs2().sum());
  CHECK(std::abs(grid_norm - v.coeffs.squaredNorm()) < 1e-8 * v.coeffs.squaredNorm());
}

TEST_CASE("closed-form eigenfunction satisfies the ODE on a fine grid") {
  const auto p = CanonicalParams<double>::from_tetrad(4.0, 11.0 / 14.0, 22.0 / 7.0, C(1.0));
  const auto sol = construct_phi(p, RootSign::Minus, Parity::Even);
  const double beta = sol.alpha();
  const double h = 1e-3;
  const double half = 12.0 / std::sqrt(beta);
  std::vector<double> xs;
  for (double x = -half; x <= half; x += h) xs.push_back(x);
  const auto f = reconstruct(sol.coeffs, beta, Parity::Even, std::span<const double>(xs));
  const Mat2<double> A = p.A().matrix();
  const Mat2<double> B = p.B().matrix();
  double res = 0, norm = 0;
  for (std::size_t i = 2; i + 2 < xs.size(); ++i) {
    Vec2<double> phi(f.upper(i), f.lower(i));
    Vec2<double> d2;
    for (int comp = 0; comp < 2; ++comp) {
      const auto& arr = comp == 0 ? f.upper : f.lower;
      d2(comp) = (-arr(i + 2) + 16.0 * arr(i + 1) - 30.0 * arr(i) + 16.0 * arr(i - 1) - arr(i - 2)) / (12.0 * h * h);
    }
    const Vec2<double> r = -(B * d2) + xs[i] * xs[i] * (A * phi) - sol.lambda * phi;
    res += r.squaredNorm();
    norm += phi.squaredNorm();
  }
  CHECK(std::sqrt(res / norm) < 1e-6);
}

TEST_CASE("CSV dump of the stored matrix") {
  const auto p = CanonicalParams<double>::from_tetrad(2.0, 1.0, 1.0, C(0.0, 0.5));
  std::ostringstream os;
  write_csv(os, assemble_sector(p, 1.0, Parity::Even, 1));
  CHECK(os.str() == "1+0j,0+0.25j\n0-0.25j,1.5+0j\n");
}
