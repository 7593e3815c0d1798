#include <doctest.h>

#include <cmath>
#include <random>

#include "omrl/analysis.hpp"
#include "omrl/quantize.hpp"
#include "omrl/spectral.hpp"

using namespace omrl;

namespace {
const OpeningStrip kStrip{1.0 / 3.0, 2.0 / 3.0};
}

TEST_SUITE_BEGIN("analysis");

TEST_CASE("husimi of a coherent state peaks at the cell holding its center") {
  TorusSpec spec{81, 0.5, 0.5};
  CoherentState cs = coherent_state(spec, {0.62, 0.17});
  HusimiGrid grid = husimi(cs.vector, spec, 32, 32);
  CHECK(grid.values.minCoeff() >= 0.0);
  int bi = 0, bj = 0;
  grid.values.maxCoeff(&bi, &bj);
  CHECK(std::abs((bi + 0.5) / 32.0 - 0.62) <= 1.5 / 32.0);
  CHECK(std::abs((bj + 0.5) / 32.0 - 0.17) <= 1.5 / 32.0);
}

TEST_CASE("husimi resolves the identity: grid mean times N near one") {
  TorusSpec spec{100, 0.0, 0.0};
  std::mt19937 rng(7);
  std::normal_distribution<double> g;
  Vector v(spec.N);
  for (int j = 0; j < spec.N; ++j) v[j] = Complex(g(rng), g(rng));
  v /= v.norm();
  int res = 2 * static_cast<int>(std::ceil(std::sqrt(100.0)));
  HusimiGrid grid = husimi(v, spec, res, res);
  CHECK(grid.values.mean() * spec.N == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("husimi is invariant under a global phase and rejects zero states") {
  TorusSpec spec{27, 0.5, 0.5};
  CoherentState cs = coherent_state(spec, {0.2, 0.8});
  HusimiGrid a = husimi(cs.vector, spec, 16, 16);
  Vector rotated = std::polar(1.0, 1.234) * cs.vector;
  HusimiGrid b = husimi(rotated, spec, 16, 16);
  CHECK((a.values - b.values).cwiseAbs().maxCoeff() < 1e-14);
  CHECK_THROWS_AS(husimi(Vector::Zero(27), spec, 16, 16), ZeroState);
  CHECK_THROWS_AS(husimi(cs.vector, spec, 0, 16), ConfigError);
}

TEST_CASE("mixed representation collapses to Husimi squared when R = L") {
  TorusSpec spec{27, 0.5, 0.5};
  CoherentState cs = coherent_state(spec, {0.1, 0.4});
  Vector v = cs.vector;  // unit norm, <v|v> = 1
  HusimiGrid h = husimi(v, spec, 16, 16);
  HusimiGrid m = mixed_representation(v, v, spec, 16, 16);
  CHECK((m.values - h.values.cwiseProduct(h.values)).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("mixed representation requires a biorthonormal pair") {
  TorusSpec spec{27, 0.5, 0.5};
  Vector v = coherent_state(spec, {0.1, 0.4}).vector;
  CHECK_THROWS_AS(mixed_representation(v, 2.0 * v, spec, 8, 8), NotBiorthonormal);
}

TEST_CASE("state overlap: normalized, scale- and phase-insensitive") {
  Vector a = Vector::Zero(4), b = Vector::Zero(4);
  a[0] = 1.0;
  b[1] = 1.0;
  CHECK(state_overlap(a, a) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(state_overlap(a, b) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(state_overlap(a, std::polar(3.0, 0.7) * a) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(state_overlap(a, Vector::Zero(4)), ZeroState);
}

TEST_CASE("grid helpers: correlation and opening mass") {
  TorusSpec spec{27, 0.5, 0.5};
  Vector v = coherent_state(spec, {0.1, 0.4}).vector;
  HusimiGrid h = husimi(v, spec, 24, 24);
  CHECK(grid_correlation(h, h) == doctest::Approx(1.0).epsilon(1e-12));
  // a state centered far from the strip leaves almost no mass inside it
  CHECK(opening_mass_fraction(h, kStrip) < 0.05);
  Vector w = coherent_state(spec, {0.5, 0.4}).vector;
  CHECK(opening_mass_fraction(husimi(w, spec, 24, 24), kStrip) > 0.5);
}

TEST_CASE("localization: long-lived states concentrate on the manifold covers") {
  // Frozen regression values (the quantitative metric is ours): for the ten
  // longest-lived baker states at N = 243, Husimi mass on the depth-4
  // Cantor cover (cells avoiding the middle-third digit, area 16/81 = 0.20)
  // exceeds 0.35, taken along p for right states (unstable manifolds run
  // along q at Cantor p values) and along q for left states; each family is
  // more concentrated on its own cover than on the opposite one.
  TorusSpec spec{243, 0.5, 0.5};
  OpenMapOperator Uo = open_propagator(baker_propagator(spec), kStrip);
  ResonanceSet rs = exact_resonances(Uo);
  const int res = 81;
  auto cantor = [](int cell) {
    for (int d = 0; d < 4; ++d) {
      if (cell % 3 == 1) return false;
      cell /= 3;
    }
    return true;
  };
  auto cover_mass = [&](const HusimiGrid& g, bool along_q) {
    double m = 0.0;
    for (int k = 0; k < res; ++k) {
      if (!cantor(k)) continue;
      m += along_q ? g.values.row(k).sum() : g.values.col(k).sum();
    }
    return m / g.total();
  };
  double sum_rp = 0, sum_rq = 0, sum_lq = 0, sum_lp = 0;
  for (int n = 0; n < 10; ++n) {
    HusimiGrid gr = husimi(rs.right_vectors.col(n), spec, res, res);
    HusimiGrid gl = husimi(rs.left_vectors.col(n), spec, res, res);
    double rp = cover_mass(gr, false), rq = cover_mass(gr, true);
    double lq = cover_mass(gl, true), lp = cover_mass(gl, false);
    CHECK(rp >= 0.35);
    CHECK(lq >= 0.35);
    sum_rp += rp;
    sum_rq += rq;
    sum_lq += lq;
    sum_lp += lp;
  }
  CHECK(sum_rp > sum_rq);  // right family prefers the unstable cover
  CHECK(sum_lq > sum_lp);  // left family prefers the stable cover
}

TEST_CASE("weyl fit: closed spectrum gives slope one; too few sizes throw") {
  auto fake = [](int N, double modulus) {
    ResonanceSet rs;
    for (int n = 0; n < N; ++n) rs.eigenvalues.push_back(std::polar(modulus, 0.01 * n));
    return rs;
  };
  std::vector<std::pair<int, ResonanceSet>> closed;
  for (int N : {20, 40, 80, 160}) closed.emplace_back(N, fake(N, 1.0));
  WeylFit fit = weyl_fit(closed, 0.5, 2.0);
  CHECK(fit.slope == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(fit.counts_monotone);
  CHECK(fit.counts == std::vector<int>{20, 40, 80, 160});

  std::vector<std::pair<int, ResonanceSet>> two = {closed[0], closed[1]};
  CHECK_THROWS_AS(weyl_fit(two, 0.5, 2.0), TooFewSizes);
  CHECK_THROWS_AS(weyl_fit(closed, 1.5, 2.0), ConfigError);
}

TEST_SUITE_END();
