#pragma once

#include <utility>
#include <vector>

#include "omrl/scar.hpp"
#include "omrl/spectral.hpp"
#include "omrl/types.hpp"

namespace omrl {

enum class GridNormalization { raw, unit_mean };

/// Phase-space field sampled on grid centers ((i+1/2)/n_q, (j+1/2)/n_p);
/// values(i, j) indexed by (q cell i, p cell j), nonnegative and finite.
struct HusimiGrid {
  int n_q = 0;
  int n_p = 0;
  Eigen::MatrixXd values;
  TorusSpec spec;
  GridNormalization normalization = GridNormalization::raw;

  double total() const { return values.sum(); }
};

/// Default square resolution max(64, 2 ceil(sqrt(N))).
int default_husimi_resolution(const TorusSpec& spec);

/// values[i][j] = |<coherent(q_i, p_j)|state>|^2.
HusimiGrid husimi(const Vector& state, const TorusSpec& spec, int n_q, int n_p);

/// Mixed representation h(q,p) = |<q,p|R> <L|q,p>|^2, computed from the two
/// amplitude grids before the modulus so cross phases survive. Requires the
/// pair biorthonormalized: |<L|R> - 1| <= 1e-6.
HusimiGrid mixed_representation(const Vector& right, const Vector& left,
                                const TorusSpec& spec, int n_q, int n_p);

/// |<a|b>|^2 / (<a|a><b|b>), scale- and phase-insensitive.
double state_overlap(const Vector& a, const Vector& b);

/// Fraction of grid mass inside the opening strip in q.
double opening_mass_fraction(const HusimiGrid& grid, const OpeningStrip& strip);

/// Pearson correlation of two grids of equal resolution.
double grid_correlation(const HusimiGrid& a, const HusimiGrid& b);

/// Fractal Weyl law: counts n(N) = #{z : |z| >= nu_c} and the least-squares
/// slope of log n vs log N, against the reference d/2.
struct WeylFit {
  std::vector<int> sizes;
  std::vector<int> counts;
  double nu_c = 0.5;
  double slope = 0.0;
  double intercept = 0.0;
  double repeller_dimension = 0.0;
  bool counts_monotone = true;  // regression expectation, flagged not fatal
};

WeylFit weyl_fit(const std::vector<std::pair<int, ResonanceSet>>& spectra,
                 double nu_c, double d);

}  // namespace omrl
