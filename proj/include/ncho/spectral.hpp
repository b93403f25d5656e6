#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ncho/matrix_core.hpp"
#include "ncho/sector_operator.hpp"

namespace ncho {

/// Lowest eigenpairs of one or both truncated parity sectors.
struct SpectralResult {
  std::vector<double> eigenvalues;             // ascending
  std::vector<Parity> parities;                // sector of each eigenvalue
  std::vector<CoeffVector<double>> eigenvectors;  // empty unless requested
  std::vector<double> convergence;             // |λ(N) − λ(N/2)|, +inf if unavailable
  int n_blocks_used = 0;
  double alpha_used = 0;
};

struct SpectrumOptions {
  bool with_vectors = true;
  bool estimate_convergence = true;
};

/// Lowest k eigenpairs of the 2N×2N truncation of one sector.
SpectralResult truncated_spectrum(const HermitianPair<double>& pair, double alpha, Parity parity, int n_blocks,
                                  int k, const SpectrumOptions& options = {});
SpectralResult truncated_spectrum(const CanonicalParams<double>& params, double alpha, Parity parity,
                                  int n_blocks, int k, const SpectrumOptions& options = {});

struct FullSpectrumOptions {
  int n_blocks = 150;
  std::optional<double> alpha;  // defaults to the β₋ root
  bool adaptive = true;         // double N until the k-th eigenvalue settles
  double tol = 1e-9;            // relative to max(1, |λ_k|)
  int max_blocks = 600;
  bool with_vectors = false;
};

/// Spec H = Spec H⁺ ∪ Spec H⁻, merged ascending with parity labels.
SpectralResult full_spectrum(const CanonicalParams<double>& params, int k, const FullSpectrumOptions& options = {});

/// Exact spectrum {sqrt(a_j b_j)(2n+1)} of a commuting pair, lowest k values.
std::vector<double> commutative_spectrum(const HermitianPair<double>& pair, int k);

/// Two-sided bracket sqrt(a1 b1)(2n+1) <= λ_{2n+1} <= λ_{2n+2} <= sqrt(a2 b2)(2n+1).
std::pair<double, double> weyl_bounds(const HermitianPair<double>& pair, int n);

struct ConvergenceTable {
  std::vector<int> n_blocks;
  std::vector<std::vector<double>> rows;  // rows[i] = lowest k eigenvalues at n_blocks[i]
  std::vector<std::string> warnings;
  bool monotone = true;
};

/// Truncations are Galerkin approximations of a non-negative operator, so each
/// eigenvalue must decrease with N; increases above 1e-12 relative are flagged.
ConvergenceTable convergence_study(const CanonicalParams<double>& params, double alpha, Parity parity,
                                   const std::vector<int>& n_blocks, int k);

/// Default Hermite scale: the smaller root β₋.
double default_alpha(const CanonicalParams<double>& params);

}  // namespace ncho
