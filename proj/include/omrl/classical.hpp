#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "omrl/types.hpp"

namespace omrl {

/// Classical map parameters. The cat matrix is fixed to [[2,1],[3,2]]; its
/// Lyapunov exponent is ln(2+sqrt(3)), the baker's is ln(3).
struct MapSpec {
  MapKind kind = MapKind::baker;

  static MapSpec baker() { return MapSpec{MapKind::baker}; }
  static MapSpec cat() { return MapSpec{MapKind::cat}; }

  std::array<std::array<int, 2>, 2> cat_matrix() const { return {{{2, 1}, {3, 2}}}; }
  double lyapunov() const;

  /// Constant phase (in cycles) a coherent state acquires per map step on top
  /// of N times the step action; the metaplectic phase of the one-step
  /// linearization. Zero for the baker, -arg(2-i)/(4*pi) for the cat.
  double step_phase_offset() const;
};

struct BakerStepResult {
  PhasePoint next;
  int symbol;  // branch index in {0,1,2}
};

struct CatStepResult {
  PhasePoint next;
  int wind_q;  // integer subtracted from 2q+p
  int wind_p;  // integer subtracted from 3q+2p
};

BakerStepResult baker_step(PhasePoint x);
CatStepResult cat_step(PhasePoint x);
PhasePoint baker_step_back(PhasePoint x);
PhasePoint cat_step_back(PhasePoint x);

/// A periodic orbit of the open map. Points are exact rationals converted to
/// double at this boundary; `actions` holds the per-step quantum phase
/// actions S_l (the phase a coherent state acquires in one step is
/// 2*pi*(N*S_l + step_phase_offset)).
struct PeriodicOrbit {
  MapKind kind = MapKind::baker;
  int period = 0;                 // fundamental period L
  std::vector<PhasePoint> points; // L phase-space points
  std::string label;              // baker: digits in {0,1,2}; cat: "a/D,b/D"
  std::vector<double> actions;    // S_l, filled by orbit_actions
  double total_action = 0.0;      // sum of actions
  bool corner_duplicate = false;  // baker "2...2" label of the (0,0) corner
};

/// All fundamental baker orbits with period <= L_max avoiding the strip,
/// ordered by (period, label). One representative per cyclic class; the
/// all-2 corner label is kept but flagged as a duplicate of the all-0 one.
std::vector<PeriodicOrbit> enumerate_baker_orbits(int L_max, const OpeningStrip& strip);

/// All fundamental cat orbits with period <= L_max avoiding the strip.
/// Periodic points solve (C^L - I) x = m over integer vectors m; they are
/// enumerated exactly as multiples of the columns of adj(C^L - I)/det.
std::vector<PeriodicOrbit> enumerate_cat_orbits(int L_max, const OpeningStrip& strip);

/// Fill the per-step actions of an orbit. Throws InconsistentOrbit when the
/// points do not map onto each other under the orbit's map.
void orbit_actions(PeriodicOrbit& orbit, const MapSpec& map);

/// Classical mixed-representation generating function of the baker branch:
/// S(q, p') = 3 q p' - eps (q + p'), with p = dS/dq and q' = dS/dp'.
double baker_generating_action(double q, double p_next, int branch);

/// Cat position-position generating function on the lifted step:
/// S(q, qb') = q^2 - q qb' + qb'^2 with qb' = 2q + p the unfolded image.
double cat_generating_action(double q, double q_lift_next);

/// Box-counting dimension of the finite-time trapped set. Boxes of side
/// base^-depth (base 3 for the baker, 2 for the cat); a box survives when one
/// of its sub-sampled points stays outside the strip for h forward and h
/// backward steps, h capped at the number of steps the box scale can resolve.
double box_counting_dimension(const MapSpec& map, const OpeningStrip& strip,
                              int horizon, const std::vector<int>& depths);

}  // namespace omrl
