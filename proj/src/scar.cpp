#include "omrl/scar.hpp"

#include <cmath>

namespace omrl {

namespace {

Complex polar1(double cycles) {
  double a = 2.0 * kPi * cycles;
  return {std::cos(a), std::sin(a)};
}

}  // namespace

CoherentState coherent_state(const TorusSpec& spec, PhasePoint center) {
  const int N = spec.N;
  Vector v = Vector::Zero(N);
  for (int j = 0; j < N; ++j) {
    double x = spec.position(j);
    Complex amp = 0.0;
    for (int nu = -4; nu <= 4; ++nu) {
      double d = x - center.q + nu;
      double g = std::exp(-kPi * N * d * d);
      if (g == 0.0) continue;
      double phase = 2.0 * kPi * (N * center.p * d - nu * spec.chi_p);
      amp += g * Complex(std::cos(phase), std::sin(phase));
    }
    v[j] = amp;
  }
  double n = v.norm();
  if (n == 0.0) throw NumericalError("coherent state underflow");
  v /= n;
  return {spec, center, std::move(v)};
}

OrbitMode orbit_mode(const PeriodicOrbit& orbit, int k, const TorusSpec& spec,
                     const MapSpec& map) {
  const int L = orbit.period;
  if (k < 0 || k >= L) throw BadModeIndex("mode index k out of range");
  if (orbit.actions.size() != static_cast<size_t>(L))
    throw InconsistentOrbit("orbit actions not filled");
  const double mu = map.step_phase_offset();
  const double A = (spec.N * orbit.total_action + k) / L + mu;

  Vector v = Vector::Zero(spec.N);
  double theta = 0.0;  // action accumulated before reaching point j
  for (int j = 0; j < L; ++j) {
    CoherentState cs = coherent_state(spec, orbit.points[j]);
    v += polar1(-(j * A - spec.N * theta - j * mu)) * cs.vector;
    theta += orbit.actions[j];
  }
  v /= std::sqrt(double(L));
  return {&orbit, k, A, std::move(v)};
}

int ehrenfest_cutoff(const TorusSpec& spec, const MapSpec& map, double factor) {
  int tau = static_cast<int>(std::lround(factor * std::log(double(spec.N)) / map.lyapunov()));
  return std::max(1, tau);
}

namespace {

ScarPair scar_pair_impl(const OrbitMode& mode, const Matrix& U, const Matrix& Ud, int tau) {
  if (tau < 1) throw ConfigError("scar cutoff tau must be >= 1");
  const double A = mode.bohr_phase;
  Vector right = Vector::Zero(mode.vector.size());
  Vector left = Vector::Zero(mode.vector.size());
  Vector vr = mode.vector;
  Vector vl = mode.vector;
  for (int t = 0; t <= tau; ++t) {
    double w = std::cos(kPi * t / (2.0 * tau));  // w(tau) = 0: U^tau never enters
    right += w * polar1(-A * t) * vr;
    left += w * polar1(A * t) * vl;
    if (t < tau) {
      vr = U * vr;
      vl = Ud * vl;
    }
  }
  Complex c = left.dot(right);  // <L|R> before normalization
  if (std::abs(c) < 1e-12) throw DegeneratePair("scar pair decays immediately");
  double nr = right.norm(), nl = left.norm();
  Complex sc = std::sqrt(c);
  right *= std::sqrt(nl / nr) / sc;
  left *= std::conj(std::sqrt(nr / nl) / sc);
  ScarPair out;
  out.k = mode.k;
  out.bohr_phase = A;
  out.tau = tau;
  out.right = std::move(right);
  out.left = std::move(left);
  return out;
}

}  // namespace

ScarPair scar_pair(const OrbitMode& mode, const OpenMapOperator& U_open, int tau) {
  Matrix Ud = U_open.matrix.adjoint();
  return scar_pair_impl(mode, U_open.matrix, Ud, tau);
}

std::vector<ScarPair> build_scar_basis(const std::vector<PeriodicOrbit>& orbits,
                                       int N_s, const OpenMapOperator& U_open,
                                       int tau) {
  MapSpec map = U_open.kind == MapKind::baker ? MapSpec::baker() : MapSpec::cat();
  Matrix Ud = U_open.matrix.adjoint();
  std::vector<ScarPair> basis;
  basis.reserve(N_s);
  for (const PeriodicOrbit& orbit : orbits) {
    if (orbit.corner_duplicate) continue;
    for (int k = 0; k < orbit.period; ++k) {
      OrbitMode mode = orbit_mode(orbit, k, U_open.spec, map);
      basis.push_back(scar_pair_impl(mode, U_open.matrix, Ud, tau));
      if (static_cast<int>(basis.size()) == N_s) return basis;
    }
  }
  throw InsufficientOrbits("only " + std::to_string(basis.size()) + " modes available, need " +
                           std::to_string(N_s) + "; increase L_max");
}

}  // namespace omrl
