#include "ncho/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <numeric>
#include <sstream>

#include "ncho/closed_form.hpp"
#include "ncho/hermitian_eigensolver.hpp"
#include "ncho/parallel.hpp"

namespace ncho {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Eigen::VectorXd sector_eigenvalues(const HermitianPair<double>& pair, double alpha, Parity parity, int n_blocks) {
  const auto op = assemble_sector(pair, alpha, parity, n_blocks);
  HermitianEigenSolver<CMatrix<double>> solver(op.storage, Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

void check_count(int k, int n_blocks) {
  if (k < 0 || k > 2 * n_blocks) {
    throw Error(ErrorCode::InvalidArgument, "requested eigenvalue count must lie in [0, 2N]");
  }
}

}  // namespace

double default_alpha(const CanonicalParams<double>& params) { return beta_roots(params).minus.beta; }

SpectralResult truncated_spectrum(const HermitianPair<double>& pair, double alpha, Parity parity, int n_blocks,
                                  int k, const SpectrumOptions& options) {
  require_positive_alpha(alpha);
  if (n_blocks < 1) throw Error(ErrorCode::ZeroDimension, "number of blocks must be at least 1");
  check_count(k, n_blocks);

  const auto op = assemble_sector(pair, alpha, parity, n_blocks);
  HermitianEigenSolver<CMatrix<double>> solver(
      op.storage, options.with_vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);

  SpectralResult result;
  result.n_blocks_used = n_blocks;
  result.alpha_used = alpha;
  result.eigenvalues.assign(solver.eigenvalues().data(), solver.eigenvalues().data() + k);
  result.parities.assign(k, parity);
  if (options.with_vectors) {
    for (int i = 0; i < k; ++i) result.eigenvectors.emplace_back(parity, solver.eigenvectors().col(i));
  }

  result.convergence.assign(k, kInf);
  const int half = n_blocks / 2;
  if (options.estimate_convergence && half >= 1) {
    const Eigen::VectorXd coarse = sector_eigenvalues(pair, alpha, parity, half);
    for (int i = 0; i < std::min<int>(k, coarse.size()); ++i) {
      result.convergence[i] = std::abs(result.eigenvalues[i] - coarse(i));
    }
  }
  return result;
}

SpectralResult truncated_spectrum(const CanonicalParams<double>& params, double alpha, Parity parity,
                                  int n_blocks, int k, const SpectrumOptions& options) {
  return truncated_spectrum(params.pair(), alpha, parity, n_blocks, k, options);
}

namespace {

SpectralResult merge(const SpectralResult& even, const SpectralResult& odd, int k) {
  std::vector<std::pair<double, int>> order;  // (value, index into even or ~index into odd)
  for (std::size_t i = 0; i < even.eigenvalues.size(); ++i) order.emplace_back(even.eigenvalues[i], int(i));
  for (std::size_t i = 0; i < odd.eigenvalues.size(); ++i) order.emplace_back(odd.eigenvalues[i], ~int(i));
  std::stable_sort(order.begin(), order.end(), [](const auto& x, const auto& y) { return x.first < y.first; });

  SpectralResult out;
  out.n_blocks_used = even.n_blocks_used;
  out.alpha_used = even.alpha_used;
  for (int i = 0; i < k && i < int(order.size()); ++i) {
    const auto [value, idx] = order[i];
    const SpectralResult& src = idx >= 0 ? even : odd;
    const int j = idx >= 0 ? idx : ~idx;
    out.eigenvalues.push_back(value);
    out.parities.push_back(idx >= 0 ? Parity::Even : Parity::Odd);
    out.convergence.push_back(src.convergence[j]);
    if (!src.eigenvectors.empty()) out.eigenvectors.push_back(src.eigenvectors[j]);
  }
  return out;
}

SpectralResult both_sectors(const HermitianPair<double>& pair, double alpha, int n_blocks, int k,
                            const SpectrumOptions& options) {
  const int per_sector = std::min(k, 2 * n_blocks);
  auto run = [&](Parity parity) { return truncated_spectrum(pair, alpha, parity, n_blocks, per_sector, options); };
  if (thread_count() > 1) {
    auto odd = std::async(std::launch::async, run, Parity::Odd);
    SpectralResult even = run(Parity::Even);
    return merge(even, odd.get(), k);
  }
  SpectralResult even = run(Parity::Even);
  return merge(even, run(Parity::Odd), k);
}

}  // namespace

SpectralResult full_spectrum(const CanonicalParams<double>& params, int k, const FullSpectrumOptions& options) {
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "requested eigenvalue count must be positive");
  if (options.n_blocks < 1) throw Error(ErrorCode::ZeroDimension, "number of blocks must be at least 1");
  if (k > 4 * options.n_blocks) throw Error(ErrorCode::InvalidArgument, "k exceeds the truncation dimension");
  const double alpha = options.alpha.value_or(default_alpha(params));
  require_positive_alpha(alpha);
  const auto pair = params.pair();

  // The first truncation carries its own |λ(N) − λ(N/2)| estimate; later ones
  // are compared with the previous truncation.
  int n = options.n_blocks;
  SpectralResult current = both_sectors(pair, alpha, n, k, {options.with_vectors, true});
  auto settled = [&](const SpectralResult& r) {
    return r.convergence.back() < options.tol * std::max(1.0, std::abs(r.eigenvalues.back()));
  };
  if (!options.adaptive || settled(current)) return current;

  while (true) {
    const int next = 2 * n;
    if (next > options.max_blocks) {
      std::ostringstream msg;
      msg << "eigenvalue " << k << " still moving at N=" << n << " (limit " << options.max_blocks << ")";
      throw Error(ErrorCode::TruncationBudgetExceeded, msg.str());
    }
    SpectralResult refined = both_sectors(pair, alpha, next, k, {options.with_vectors, false});
    for (std::size_t i = 0; i < refined.eigenvalues.size(); ++i) {
      refined.convergence[i] = std::abs(refined.eigenvalues[i] - current.eigenvalues[i]);
    }
    current = std::move(refined);
    n = next;
    if (settled(current)) return current;
  }
}

std::vector<double> commutative_spectrum(const HermitianPair<double>& pair, int k) {
  const double comm = commutator_norm(pair.A, pair.B);
  if (comm > 1e-12 * pair.A.norm() * pair.B.norm()) {
    throw Error(ErrorCode::NotCommutative, "AB != BA");
  }
  // Common eigenvectors: those of whichever matrix is not a multiple of I.
  const auto ea = eig2(pair.A);
  const auto eb = eig2(pair.B);
  const auto& basis = ea.values[0] != ea.values[1] ? ea.vectors : eb.vectors;

  std::vector<double> levels;
  for (const auto& w : basis) {
    const double a = (w.adjoint() * (pair.A * w))(0).real();
    const double b = (w.adjoint() * (pair.B * w))(0).real();
    const double omega = std::sqrt(a * b);
    for (int n = 0; n < k; ++n) levels.push_back(omega * (2 * n + 1));
  }
  std::sort(levels.begin(), levels.end());
  levels.resize(std::min<std::size_t>(k, levels.size()));
  return levels;
}

std::pair<double, double> weyl_bounds(const HermitianPair<double>& pair, int n) {
  if (n < 0) throw Error(ErrorCode::InvalidArgument, "eigenvalue pair index must be non-negative");
  const auto ea = eig2(pair.A);
  const auto eb = eig2(pair.B);
  const double level = 2.0 * n + 1.0;
  return {std::sqrt(ea.values[0] * eb.values[0]) * level, std::sqrt(ea.values[1] * eb.values[1]) * level};
}

ConvergenceTable convergence_study(const CanonicalParams<double>& params, double alpha, Parity parity,
                                   const std::vector<int>& n_blocks, int k) {
  ConvergenceTable table;
  const auto pair = params.pair();
  std::vector<int> sorted = n_blocks;
  std::sort(sorted.begin(), sorted.end());
  for (int n : sorted) {
    check_count(k, n);
    const Eigen::VectorXd values = sector_eigenvalues(pair, alpha, parity, n);
    table.n_blocks.push_back(n);
    table.rows.emplace_back(values.data(), values.data() + k);
  }
  for (std::size_t r = 1; r < table.rows.size(); ++r) {
    for (int i = 0; i < k; ++i) {
      const double prev = table.rows[r - 1][i];
      const double curr = table.rows[r][i];
      if (curr > prev + 1e-12 * std::max(1.0, std::abs(prev))) {
        table.monotone = false;
        std::ostringstream msg;
        msg.precision(17);
        msg << "eigenvalue " << i << " increased from " << prev << " (N=" << table.n_blocks[r - 1] << ") to "
            << curr << " (N=" << table.n_blocks[r] << ")";
        table.warnings.push_back(msg.str());
      }
    }
  }
  return table;
}

}  // namespace ncho
