#include "omrl/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numeric>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include <Eigen/SVD>

namespace omrl {

namespace {

/// Dense non-symmetric eigendecomposition, LAPACK zgeev with both
/// eigenvector families. Left columns satisfy l^H A = z l^H.
void eig_both(const Matrix& A, std::vector<Complex>& z, Matrix& VR, Matrix& VL) {
  const int n = static_cast<int>(A.rows());
  Matrix work = A;  // overwritten
  z.assign(n, Complex{});
  VR.resize(n, n);
  VL.resize(n, n);
  int info = LAPACKE_zgeev(LAPACK_COL_MAJOR, 'V', 'V', n, work.data(), n,
                           z.data(), VL.data(), n, VR.data(), n);
  if (info != 0) throw NumericalError("zgeev failed, info=" + std::to_string(info));
}

/// Sort order: descending |z|, ties by ascending phase in [0, 2 pi).
std::vector<int> spectral_order(const std::vector<Complex>& z) {
  std::vector<int> idx(z.size());
  std::iota(idx.begin(), idx.end(), 0);
  auto key = [&](int i) {
    double ph = std::arg(z[i]);
    if (ph < 0) ph += 2.0 * kPi;
    return std::pair<double, double>(-std::abs(z[i]), ph);
  };
  std::stable_sort(idx.begin(), idx.end(),
                   [&](int a, int b) { return key(a) < key(b); });
  return idx;
}

/// In-place pairwise biorthonormalization: <L_n|R_n> = 1 with equal
/// self-norms. Pairs whose rescale factor exceeds the condition cap are
/// flagged and left at unit norm.
void biorthonormalize(std::vector<Complex>& z, Matrix& VR, Matrix& VL,
                      std::vector<int>& defective) {
  constexpr double kCondCap = 1e12;
  const int n = static_cast<int>(z.size());
  for (int m = 0; m < n; ++m) {
    Complex c = VL.col(m).dot(VR.col(m));
    double nr = VR.col(m).norm(), nl = VL.col(m).norm();
    if (nr == 0.0 || nl == 0.0 || nl * nr / std::abs(c) > kCondCap) {
      defective.push_back(m);
      continue;
    }
    Complex sc = std::sqrt(c);
    VR.col(m) *= std::sqrt(nl / nr) / sc;
    VL.col(m) *= std::conj(std::sqrt(nr / nl) / sc);
  }
}

}  // namespace

ResonanceSet exact_resonances(const OpenMapOperator& U_open) {
  std::vector<Complex> z;
  Matrix VR, VL;
  eig_both(U_open.matrix, z, VR, VL);

  std::vector<int> idx = spectral_order(z);
  ResonanceSet out;
  const int n = static_cast<int>(z.size());
  out.eigenvalues.resize(n);
  out.right_vectors.resize(n, n);
  out.left_vectors.resize(n, n);
  for (int m = 0; m < n; ++m) {
    out.eigenvalues[m] = z[idx[m]];
    out.right_vectors.col(m) = VR.col(idx[m]);
    out.left_vectors.col(m) = VL.col(idx[m]);
  }
  biorthonormalize(out.eigenvalues, out.right_vectors, out.left_vectors,
                   out.defective);
  out.residuals.resize(n);
  for (int m = 0; m < n; ++m) {
    Vector r = U_open.matrix * out.right_vectors.col(m) -
               out.eigenvalues[m] * out.right_vectors.col(m);
    out.residuals[m] = r.norm() / out.right_vectors.col(m).norm();
  }
  return out;
}

ReducedProblem reduced_problem(const std::vector<ScarPair>& basis,
                               const OpenMapOperator& U_open) {
  if (basis.empty()) throw SpecMismatch("empty scar basis");
  const int N = U_open.spec.N;
  const int Ns = static_cast<int>(basis.size());
  ReducedProblem prob;
  prob.right_basis.resize(N, Ns);
  prob.left_basis.resize(N, Ns);
  for (int a = 0; a < Ns; ++a) {
    if (basis[a].right.size() != N || basis[a].left.size() != N)
      throw SpecMismatch("scar pair dimension differs from propagator");
    prob.right_basis.col(a) = basis[a].right;
    prob.left_basis.col(a) = basis[a].left;
  }
  Matrix UR = U_open.matrix * prob.right_basis;  // one matvec per right scar
  prob.H = prob.left_basis.adjoint() * UR;
  prob.S = prob.left_basis.adjoint() * prob.right_basis;
  return prob;
}

GeneralizedSolution solve_generalized(const ReducedProblem& prob) {
  Eigen::BDCSVD<Matrix> svd(prob.S, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& sig = svd.singularValues();
  const int Ns = static_cast<int>(sig.size());
  if (Ns == 0 || sig[0] <= 0.0)
    throw RankZero("overlap matrix S is numerically zero");
  int r = 0;
  while (r < Ns && sig[r] >= prob.svd_tol * sig[0]) ++r;
  if (r == 0) throw RankZero("all singular values of S below threshold");

  Matrix Wr = svd.matrixU().leftCols(r);
  Matrix Vr = svd.matrixV().leftCols(r);
  Eigen::VectorXd si = sig.head(r).cwiseSqrt().cwiseInverse();

  Matrix Ht = si.asDiagonal() * (Wr.adjoint() * prob.H * Vr).eval() *
              si.asDiagonal();
  std::vector<Complex> z;
  Matrix yr, yl;
  eig_both(Ht, z, yr, yl);

  Matrix X = Vr * (si.asDiagonal() * yr);  // right coefficients in scar basis
  Matrix Y = Wr * (si.asDiagonal() * yl);
  Matrix Rv = prob.right_basis * X;
  Matrix Lv = prob.left_basis * Y;

  std::vector<int> idx = spectral_order(z);
  GeneralizedSolution sol;
  sol.rank = r;
  sol.singular_values.assign(sig.data(), sig.data() + Ns);
  ResonanceSet& rs = sol.resonances;
  rs.eigenvalues.resize(r);
  rs.right_vectors.resize(Rv.rows(), r);
  rs.left_vectors.resize(Lv.rows(), r);
  for (int m = 0; m < r; ++m) {
    rs.eigenvalues[m] = z[idx[m]];
    rs.right_vectors.col(m) = Rv.col(idx[m]);
    rs.left_vectors.col(m) = Lv.col(idx[m]);
  }
  biorthonormalize(rs.eigenvalues, rs.right_vectors, rs.left_vectors,
                   rs.defective);
  return sol;
}

namespace {

/// Minimum-cost rectangular assignment (Hungarian algorithm with potentials),
/// n rows <= m columns; returns the column assigned to each row.
std::vector<int> hungarian(const std::vector<std::vector<double>>& cost) {
  const int n = static_cast<int>(cost.size());
  const int m = n ? static_cast<int>(cost[0].size()) : 0;
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
  std::vector<int> p(m + 1, 0), way(m + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(m + 1, kInf);
    std::vector<char> used(m + 1, 0);
    do {
      used[j0] = 1;
      int i0 = p[j0], j1 = 0;
      double delta = kInf;
      for (int j = 1; j <= m; ++j)
        if (!used[j]) {
          double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
          if (cur < minv[j]) {
            minv[j] = cur;
            way[j] = j0;
          }
          if (minv[j] < delta) {
            delta = minv[j];
            j1 = j;
          }
        }
      for (int j = 0; j <= m; ++j)
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0);
  }
  std::vector<int> row_to_col(n, -1);
  for (int j = 1; j <= m; ++j)
    if (p[j] > 0) row_to_col[p[j] - 1] = j - 1;
  return row_to_col;
}

}  // namespace

double MatchReport::mean_distance() const {
  if (pairs.empty()) return 0.0;
  double s = 0.0;
  for (const Pair& p : pairs) s += p.distance;
  return s / pairs.size();
}

double MatchReport::max_distance() const {
  double m = 0.0;
  for (const Pair& p : pairs) m = std::max(m, p.distance);
  return m;
}

MatchReport match_spectra(const ResonanceSet& exact, const ResonanceSet& approx,
                          double nu_c) {
  if (nu_c <= 0.0 || nu_c >= 1.0) throw ConfigError("nu_c must lie in (0, 1)");
  MatchReport report;
  report.cutoff = nu_c;

  std::vector<int> ex_idx;
  for (int i = 0; i < exact.size(); ++i)
    if (std::abs(exact.eigenvalues[i]) >= nu_c) ex_idx.push_back(i);
  const int n1 = static_cast<int>(ex_idx.size());
  const int n2 = approx.size();

  std::vector<char> ap_used(n2, 0), ex_used(n1, 0);
  if (n1 > 0 && n2 > 0) {
    const bool transposed = n1 > n2;
    const int rows = transposed ? n2 : n1;
    const int cols = transposed ? n1 : n2;
    std::vector<std::vector<double>> cost(rows, std::vector<double>(cols));
    for (int a = 0; a < n1; ++a)
      for (int b = 0; b < n2; ++b) {
        double d = std::abs(exact.eigenvalues[ex_idx[a]] - approx.eigenvalues[b]);
        if (transposed)
          cost[b][a] = d;
        else
          cost[a][b] = d;
      }
    std::vector<int> assign = hungarian(cost);
    for (int rrow = 0; rrow < rows; ++rrow) {
      if (assign[rrow] < 0) continue;
      int a = transposed ? assign[rrow] : rrow;
      int b = transposed ? rrow : assign[rrow];
      report.pairs.push_back({ex_idx[a], b, cost[rrow][assign[rrow]]});
      ex_used[a] = 1;
      ap_used[b] = 1;
    }
  }
  std::sort(report.pairs.begin(), report.pairs.end(),
            [](const MatchReport::Pair& a, const MatchReport::Pair& b) {
              return a.distance < b.distance;
            });
  for (int a = 0; a < n1; ++a)
    if (!ex_used[a]) report.unmatched_exact.push_back(ex_idx[a]);
  for (int b = 0; b < n2; ++b)
    if (!ap_used[b]) report.unmatched_approx.push_back(b);
  return report;
}

}  // namespace omrl
