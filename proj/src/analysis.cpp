#include "omrl/analysis.hpp"

#include <cmath>

namespace omrl {

namespace {

/// A(i, j) = <coherent((i+1/2)/n_q, (j+1/2)/n_p)|state>.
Matrix amplitude_grid(const Vector& state, const TorusSpec& spec, int n_q,
                      int n_p) {
  if (n_q <= 0 || n_p <= 0) throw ConfigError("husimi resolution must be positive");
  if (state.size() != spec.N) throw SpecMismatch("state dimension differs from spec");
  if (state.norm() == 0.0) throw ZeroState("zero state has no Husimi field");
  Matrix amp(n_q, n_p);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n_q; ++i) {
    for (int j = 0; j < n_p; ++j) {
      PhasePoint center{(i + 0.5) / n_q, (j + 0.5) / n_p};
      CoherentState cs = coherent_state(spec, center);
      amp(i, j) = cs.vector.dot(state);
    }
  }
  return amp;
}

}  // namespace

int default_husimi_resolution(const TorusSpec& spec) {
  int cells = 2 * static_cast<int>(std::ceil(std::sqrt(double(spec.N))));
  return std::max(64, cells);
}

HusimiGrid husimi(const Vector& state, const TorusSpec& spec, int n_q, int n_p) {
  Matrix amp = amplitude_grid(state, spec, n_q, n_p);
  HusimiGrid grid;
  grid.n_q = n_q;
  grid.n_p = n_p;
  grid.spec = spec;
  grid.values = amp.cwiseAbs2();
  return grid;
}

HusimiGrid mixed_representation(const Vector& right, const Vector& left,
                                const TorusSpec& spec, int n_q, int n_p) {
  Complex c = left.dot(right);
  if (std::abs(c - 1.0) > 1e-6)
    throw NotBiorthonormal("pair has <L|R> = " + std::to_string(std::abs(c)) +
                           ", expected 1");
  Matrix ar = amplitude_grid(right, spec, n_q, n_p);
  Matrix al = amplitude_grid(left, spec, n_q, n_p);
  HusimiGrid grid;
  grid.n_q = n_q;
  grid.n_p = n_p;
  grid.spec = spec;
  // h = |<q,p|R> <L|q,p>|^2: amplitude product first, modulus last
  grid.values = (ar.array() * al.array().conjugate()).abs2();
  return grid;
}

double state_overlap(const Vector& a, const Vector& b) {
  double na = a.squaredNorm(), nb = b.squaredNorm();
  if (na == 0.0 || nb == 0.0) throw ZeroState("overlap of a zero state");
  return std::norm(a.dot(b)) / (na * nb);
}

double opening_mass_fraction(const HusimiGrid& grid, const OpeningStrip& strip) {
  double total = grid.total();
  if (total == 0.0) return 0.0;
  double inside = 0.0;
  for (int i = 0; i < grid.n_q; ++i) {
    if (strip.contains((i + 0.5) / grid.n_q)) inside += grid.values.row(i).sum();
  }
  return inside / total;
}

double grid_correlation(const HusimiGrid& a, const HusimiGrid& b) {
  if (a.n_q != b.n_q || a.n_p != b.n_p)
    throw SpecMismatch("grid resolutions differ");
  const double n = double(a.n_q) * a.n_p;
  double ma = a.values.mean(), mb = b.values.mean();
  Eigen::ArrayXXd da = a.values.array() - ma, db = b.values.array() - mb;
  double cov = (da * db).sum() / n;
  double sa = std::sqrt(da.square().sum() / n), sb = std::sqrt(db.square().sum() / n);
  if (sa == 0.0 || sb == 0.0) throw NumericalError("constant grid in correlation");
  return cov / (sa * sb);
}

WeylFit weyl_fit(const std::vector<std::pair<int, ResonanceSet>>& spectra,
                 double nu_c, double d) {
  if (nu_c <= 0.0 || nu_c >= 1.0) throw ConfigError("nu_c must lie in (0, 1)");
  std::vector<std::pair<int, int>> data;
  for (const auto& [N, rs] : spectra) {
    int count = 0;
    for (const Complex& z : rs.eigenvalues)
      if (std::abs(z) >= nu_c) ++count;
    data.emplace_back(N, count);
  }
  std::sort(data.begin(), data.end());
  data.erase(std::unique(data.begin(), data.end(),
                         [](auto& a, auto& b) { return a.first == b.first; }),
             data.end());
  if (data.size() < 3) throw TooFewSizes("Weyl fit needs >= 3 distinct sizes");

  WeylFit fit;
  fit.nu_c = nu_c;
  fit.repeller_dimension = d;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const int m = static_cast<int>(data.size());
  for (auto& [N, count] : data) {
    fit.sizes.push_back(N);
    fit.counts.push_back(count);
    if (count <= 0) throw NumericalError("empty long-lived spectrum in Weyl fit");
    double x = std::log(double(N)), y = std::log(double(count));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  fit.slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  fit.intercept = (sy - fit.slope * sx) / m;
  for (int i = 1; i < m; ++i)
    if (fit.counts[i] < fit.counts[i - 1]) fit.counts_monotone = false;
  return fit;
}

}  // namespace omrl
