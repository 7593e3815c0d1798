#pragma once

#include <vector>

#include "omrl/quantize.hpp"
#include "omrl/scar.hpp"

namespace omrl {

/// Complex eigenvalues of an open propagator with biorthonormalized
/// right/left eigenvector columns, sorted by descending |z| (ties by
/// ascending phase in [0, 2 pi)). <L_n|R_m> = delta_nm with equal
/// self-norms per pair; residuals[n] = ||U R_n - z_n R_n||.
struct ResonanceSet {
  std::vector<Complex> eigenvalues;
  Matrix right_vectors;  // N x n, column n pairs with eigenvalues[n]
  Matrix left_vectors;
  std::vector<double> residuals;
  std::vector<int> defective;  // indices where biorthonormalization failed

  int size() const { return static_cast<int>(eigenvalues.size()); }
};

/// Full dense non-Hermitian eigendecomposition of U (open or closed) with
/// pairwise biorthonormalization. Near-degenerate Jordan clusters (pair
/// condition above 1e12) are flagged in `defective`, not rescaled.
ResonanceSet exact_resonances(const OpenMapOperator& U_open);

/// Reduced-space matrices over a scar basis:
/// H[a][b] = <psi_a^L| U |psi_b^R>, S[a][b] = <psi_a^L|psi_b^R>.
struct ReducedProblem {
  Matrix H;
  Matrix S;
  double svd_tol = 1e-8;
  Matrix right_basis;  // N x N_s scar columns, kept for lifting
  Matrix left_basis;
};

ReducedProblem reduced_problem(const std::vector<ScarPair>& basis,
                               const OpenMapOperator& U_open);

/// Singular values of S from the last solve, exposed for diagnostics.
struct GeneralizedSolution {
  ResonanceSet resonances;
  std::vector<double> singular_values;
  int rank = 0;
};

/// Truncated-SVD regularization of S at relative threshold svd_tol, H
/// projected to the retained subspace, standard eigenproblem there;
/// eigenvectors lifted back to N-vectors through the scar basis.
GeneralizedSolution solve_generalized(const ReducedProblem& prob);

/// Optimal one-to-one assignment between exact eigenvalues with |z| >= nu_c
/// and approximate eigenvalues, minimizing total complex distance.
struct MatchReport {
  struct Pair {
    int exact_index;
    int approx_index;
    double distance;
  };
  std::vector<Pair> pairs;  // sorted by ascending distance
  std::vector<int> unmatched_exact;
  std::vector<int> unmatched_approx;
  double cutoff = 0.5;

  double mean_distance() const;
  double max_distance() const;
};

MatchReport match_spectra(const ResonanceSet& exact, const ResonanceSet& approx,
                          double nu_c);

}  // namespace omrl
