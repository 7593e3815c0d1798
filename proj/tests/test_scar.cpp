#include <doctest.h>

#include <cmath>

#include "omrl/scar.hpp"
#include "omrl/spectral.hpp"

using namespace omrl;

namespace {
const OpeningStrip kStrip{1.0 / 3.0, 2.0 / 3.0};

PeriodicOrbit find_orbit(const std::vector<PeriodicOrbit>& orbits,
                         const std::string& label) {
  for (const auto& o : orbits)
    if (o.label == label) return o;
  REQUIRE(false);
  return {};
}
}  // namespace

TEST_SUITE_BEGIN("scar");

TEST_CASE("coherent state: unit norm, peaked at its center, symmetric width") {
  TorusSpec spec{81, 0.5, 0.5};
  CoherentState cs = coherent_state(spec, {0.4, 0.25});
  CHECK(cs.vector.norm() == doctest::Approx(1.0).epsilon(1e-12));
  int peak = 0;
  for (int j = 1; j < spec.N; ++j)
    if (std::abs(cs.vector[j]) > std::abs(cs.vector[peak])) peak = j;
  CHECK(std::abs(spec.position(peak) - 0.4) < 1.0 / spec.N);
  // p0 = 0 state is real positive at the peak (phase convention)
  CoherentState flat = coherent_state(spec, {0.4, 0.0});
  int pk = 0;
  for (int j = 1; j < spec.N; ++j)
    if (std::abs(flat.vector[j]) > std::abs(flat.vector[pk])) pk = j;
  CHECK(flat.vector[pk].real() > 0.0);
  CHECK(std::abs(flat.vector[pk].imag()) < 1e-12);
}

TEST_CASE("coherent overlap decays with phase-space distance") {
  TorusSpec spec{81, 0.5, 0.5};
  CoherentState a = coherent_state(spec, {0.3, 0.3});
  CoherentState near = coherent_state(spec, {0.3 + 0.5 / std::sqrt(81.0), 0.3});
  CoherentState far = coherent_state(spec, {0.8, 0.8});
  double onear = std::abs(a.vector.dot(near.vector));
  double ofar = std::abs(a.vector.dot(far.vector));
  CHECK(onear > 0.5);
  CHECK(ofar < 1e-6);
}

TEST_CASE("baker orbit mode is a quasi-eigenvector of the closed propagator") {
  TorusSpec spec{243, 0.5, 0.5};
  OpenMapOperator U = baker_propagator(spec);
  MapSpec map = MapSpec::baker();
  auto orbits = enumerate_baker_orbits(2, kStrip);
  PeriodicOrbit o = find_orbit(orbits, "02");
  orbit_actions(o, map);
  for (int k = 0; k < o.period; ++k) {
    OrbitMode m = orbit_mode(o, k, spec, map);
    Complex q = m.vector.dot(U.matrix * m.vector) / m.vector.squaredNorm();
    // |<phi|U|phi>| -> sqrt(3/5) for the tri-baker; the residual phase must
    // agree with the Bohr phase A
    CHECK(std::abs(q) == doctest::Approx(std::sqrt(3.0 / 5.0)).epsilon(0.03));
    double phase_diff = std::arg(q) / (2.0 * kPi) - m.bohr_phase;
    phase_diff -= std::round(phase_diff);
    CHECK(std::abs(phase_diff) < 1e-8);
  }
}

TEST_CASE("cat orbit mode is a quasi-eigenvector with the metaplectic offset") {
  TorusSpec spec{100, 0.0, 0.0};
  OpenMapOperator U = cat_propagator(spec);
  MapSpec map = MapSpec::cat();
  auto orbits = enumerate_cat_orbits(2, kStrip);
  PeriodicOrbit o = orbits.front();  // the fixed point at the origin
  REQUIRE(o.period == 1);
  orbit_actions(o, map);
  OrbitMode m = orbit_mode(o, 0, spec, map);
  Complex q = m.vector.dot(U.matrix * m.vector) / m.vector.squaredNorm();
  CHECK(std::abs(q) == doctest::Approx(std::pow(5.0, -0.25)).epsilon(0.03));
  double phase_diff = std::arg(q) / (2.0 * kPi) - m.bohr_phase;
  phase_diff -= std::round(phase_diff);
  CHECK(std::abs(phase_diff) < 1e-8);
}

TEST_CASE("orbit mode rejects bad indices and unfilled actions") {
  TorusSpec spec{27, 0.5, 0.5};
  MapSpec map = MapSpec::baker();
  auto orbits = enumerate_baker_orbits(2, kStrip);
  PeriodicOrbit o = find_orbit(orbits, "02");
  CHECK_THROWS_AS(orbit_mode(o, 0, spec, map), InconsistentOrbit);  // no actions
  orbit_actions(o, map);
  CHECK_THROWS_AS(orbit_mode(o, -1, spec, map), BadModeIndex);
  CHECK_THROWS_AS(orbit_mode(o, 2, spec, map), BadModeIndex);
}

TEST_CASE("ehrenfest cutoff") {
  TorusSpec spec{81, 0.5, 0.5};
  MapSpec map = MapSpec::baker();
  CHECK(ehrenfest_cutoff(spec, map, 1.0) == 4);  // ln 81 / ln 3
  CHECK(ehrenfest_cutoff(spec, map, 0.1) == 1);  // floor at one step
}

TEST_CASE("scar pair: biorthonormal with equal norms") {
  TorusSpec spec{81, 0.5, 0.5};
  MapSpec map = MapSpec::baker();
  OpenMapOperator Uo = open_propagator(baker_propagator(spec), kStrip);
  auto orbits = enumerate_baker_orbits(3, kStrip);
  PeriodicOrbit o = find_orbit(orbits, "002");
  orbit_actions(o, map);
  OrbitMode m = orbit_mode(o, 1, spec, map);
  ScarPair pair = scar_pair(m, Uo, 4);
  CHECK(std::abs(pair.left.dot(pair.right) - 1.0) < 1e-10);
  CHECK(pair.right.norm() == doctest::Approx(pair.left.norm()).epsilon(1e-10));
  CHECK_THROWS_AS(scar_pair(m, Uo, 0), ConfigError);
}

TEST_CASE("single-pair Rayleigh quotient approximates the anchor resonance") {
  // baker N=243: the mode on "02" whose Bohr phase is nearest to the phase of
  // the |z| = 0.895 exact resonance yields |<L|U_open|R>| within 0.15 of 0.895
  TorusSpec spec{243, 0.5, 0.5};
  MapSpec map = MapSpec::baker();
  OpenMapOperator Uo = open_propagator(baker_propagator(spec), kStrip);
  ResonanceSet exact = exact_resonances(Uo);
  int anchor = 0;
  for (int n = 1; n < exact.size(); ++n)
    if (std::abs(std::abs(exact.eigenvalues[n]) - 0.895) <
        std::abs(std::abs(exact.eigenvalues[anchor]) - 0.895))
      anchor = n;
  REQUIRE(std::abs(std::abs(exact.eigenvalues[anchor]) - 0.895) < 0.005);
  double target_phase = std::arg(exact.eigenvalues[anchor]) / (2.0 * kPi);

  auto orbits = enumerate_baker_orbits(2, kStrip);
  PeriodicOrbit o = find_orbit(orbits, "02");
  orbit_actions(o, map);
  int best_k = 0;
  double best = 1e9;
  for (int k = 0; k < o.period; ++k) {
    OrbitMode m = orbit_mode(o, k, spec, map);
    double d = m.bohr_phase - target_phase;
    d -= std::round(d);
    if (std::abs(d) < best) {
      best = std::abs(d);
      best_k = k;
    }
  }
  OrbitMode m = orbit_mode(o, best_k, spec, map);
  // the single-pair estimate converges to the resonance from below as the
  // cutoff grows (0.65 at tau 5, 0.82 at tau 12, 0.88 at tau 30)
  ScarPair pair = scar_pair(m, Uo, 12);
  Complex rq = pair.left.dot(Uo.matrix * pair.right);
  CHECK(std::abs(std::abs(rq) - 0.895) < 0.15);
}

TEST_CASE("scar basis: deterministic size, classical order, corner skipped") {
  TorusSpec spec{27, 0.5, 0.5};
  OpenMapOperator Uo = open_propagator(baker_propagator(spec), kStrip);
  auto orbits = enumerate_baker_orbits(4, kStrip);
  MapSpec map = MapSpec::baker();
  for (auto& o : orbits) orbit_actions(o, map);
  auto basis = build_scar_basis(orbits, 15, Uo, 3);
  CHECK(basis.size() == 15);
  // first mode comes from the period-1 orbit "0": k = 0
  CHECK(basis[0].k == 0);
  CHECK(basis[0].bohr_phase == doctest::Approx(0.0).epsilon(1e-14));
  CHECK_THROWS_AS(build_scar_basis(orbits, 1000, Uo, 3), InsufficientOrbits);
}

TEST_SUITE_END();
