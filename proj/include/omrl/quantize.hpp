#pragma once

#include <optional>

#include "omrl/types.hpp"

namespace omrl {

/// Closed or open torus propagator with its discretization metadata.
struct OpenMapOperator {
  TorusSpec spec;
  MapKind kind = MapKind::baker;
  std::optional<OpeningStrip> opening;
  Matrix matrix;

  bool is_open() const { return opening.has_value(); }
};

/// Discrete Fourier transform with boundary phases:
/// G[k][j] = N^{-1/2} exp(-2 pi i (j+chi_q)(k+chi_p)/N). Unitary.
Matrix fourier_matrix(const TorusSpec& spec);

/// Closed quantum baker, G_N^{-1} blockdiag(G_{N/3} x3) with antiperiodic
/// phases. Requires N divisible by 3 and chi_q = chi_p = 1/2.
OpenMapOperator baker_propagator(const TorusSpec& spec);

/// Closed quantum cat for C = [[2,1],[3,2]], periodic phases:
/// U(Q',Q) = sqrt(-i/N) exp(2 pi i (Q^2 - Q'Q + Q'^2)/N), sqrt(-i) = e^{-i pi/4}.
OpenMapOperator cat_propagator(const TorusSpec& spec);

/// Diagonal 0/1 projector onto the complement of the strip in position
/// representation; strict membership on both ends.
Matrix opening_projector(const TorusSpec& spec, const OpeningStrip& strip);

/// The open propagator P U P. Throws AlreadyOpen when U already carries an
/// opening.
OpenMapOperator open_propagator(const OpenMapOperator& U, const OpeningStrip& strip);

}  // namespace omrl
