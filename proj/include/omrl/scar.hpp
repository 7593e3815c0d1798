#pragma once

#include <vector>

#include "omrl/classical.hpp"
#include "omrl/quantize.hpp"

namespace omrl {

/// Gaussian coherent state periodized on the torus, width sigma^2 = 1/(2 pi N)
/// symmetric in q and p; unit norm, real-positive at its center for p0 = 0.
struct CoherentState {
  TorusSpec spec;
  PhasePoint center;
  Vector vector;
};

CoherentState coherent_state(const TorusSpec& spec, PhasePoint center);

/// Phase-coherent combination of the coherent states on an orbit,
/// |phi> = L^{-1/2} sum_j exp{-2 pi i (j A - N theta_j - j mu)} |q_j,p_j>,
/// theta_j the action accumulated before reaching point j and mu the map's
/// constant per-step phase offset.
struct OrbitMode {
  const PeriodicOrbit* orbit = nullptr;
  int k = 0;
  double bohr_phase = 0.0;  // A = (N S_gamma + k)/L + mu
  Vector vector;
};

OrbitMode orbit_mode(const PeriodicOrbit& orbit, int k, const TorusSpec& spec,
                     const MapSpec& map);

/// tau = max(1, round(factor * ln N / lambda)).
int ehrenfest_cutoff(const TorusSpec& spec, const MapSpec& map, double factor);

/// Right/left scar functions: the mode propagated for tau steps under the
/// open map (resp. its adjoint) with demodulation e^{-2 pi i A t} and a
/// cosine cutoff, normalized to <L|R> = 1 with equal self-norms.
struct ScarPair {
  int k = 0;
  double bohr_phase = 0.0;
  int tau = 0;
  Vector right;
  Vector left;
};

ScarPair scar_pair(const OrbitMode& mode, const OpenMapOperator& U_open, int tau);

/// Deterministic basis: orbits in classical order, all k modes per orbit,
/// corner duplicates skipped, truncated at exactly N_s pairs.
std::vector<ScarPair> build_scar_basis(const std::vector<PeriodicOrbit>& orbits,
                                       int N_s, const OpenMapOperator& U_open,
                                       int tau);

}  // namespace omrl
