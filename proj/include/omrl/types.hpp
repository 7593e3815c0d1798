#pragma once

#include <complex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace omrl {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

constexpr double kPi = 3.14159265358979323846;

/// Discretization contract shared by every quantum object: Hilbert dimension
/// N = (2*pi*hbar)^{-1} and the boundary phases of the torus.
struct TorusSpec {
  int N = 1;
  double chi_q = 0.0;
  double chi_p = 0.0;

  double position(int j) const { return (j + chi_q) / N; }
  double momentum(int k) const { return (k + chi_p) / N; }

  bool operator==(const TorusSpec&) const = default;
};

/// Escape region: a strip parallel to the p axis. Membership is the open
/// interval q_lo < x < q_hi, so grid points sitting on a boundary survive.
struct OpeningStrip {
  double q_lo = 1.0 / 3.0;
  double q_hi = 2.0 / 3.0;

  bool contains(double x) const { return q_lo < x && x < q_hi; }
  bool operator==(const OpeningStrip&) const = default;
};

enum class MapKind { baker, cat };

inline std::string to_string(MapKind k) {
  return k == MapKind::baker ? "baker" : "cat";
}

struct PhasePoint {
  double q = 0.0;
  double p = 0.0;
};

// Error types, one per contract violation named in the module contracts.

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NotDivisibleByThree : ConfigError {
  explicit NotDivisibleByThree(int N)
      : ConfigError("baker map needs N divisible by 3, got N=" + std::to_string(N)) {}
};

struct WrongBoundaryPhase : ConfigError {
  using ConfigError::ConfigError;
};

struct AlreadyOpen : ConfigError {
  AlreadyOpen() : ConfigError("propagator already has an opening") {}
};

struct InconsistentOrbit : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InsufficientSamples : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct BadModeIndex : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DegeneratePair : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InsufficientOrbits : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SpecMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RankZero : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DefectiveMatrix : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ZeroState : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NotBiorthonormal : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct TooFewSizes : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NoSuchState : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace omrl
