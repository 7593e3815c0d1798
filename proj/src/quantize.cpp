#include "omrl/quantize.hpp"

#include <cmath>

namespace omrl {

Matrix fourier_matrix(const TorusSpec& spec) {
  const int N = spec.N;
  Matrix G(N, N);
  const double norm = 1.0 / std::sqrt(double(N));
#pragma omp parallel for schedule(static)
  for (int k = 0; k < N; ++k)
    for (int j = 0; j < N; ++j) {
      double phase = -2.0 * kPi * (j + spec.chi_q) * (k + spec.chi_p) / N;
      G(k, j) = norm * Complex(std::cos(phase), std::sin(phase));
    }
  return G;
}

OpenMapOperator baker_propagator(const TorusSpec& spec) {
  if (spec.N % 3 != 0) throw NotDivisibleByThree(spec.N);
  if (spec.chi_q != 0.5 || spec.chi_p != 0.5)
    throw WrongBoundaryPhase("baker map requires antiperiodic phases chi_q = chi_p = 1/2");
  const int N = spec.N;
  const int M = N / 3;
  Matrix blocks = Matrix::Zero(N, N);
  Matrix Gm = fourier_matrix(TorusSpec{M, 0.5, 0.5});
  for (int b = 0; b < 3; ++b) blocks.block(b * M, b * M, M, M) = Gm;
  Matrix G = fourier_matrix(spec);
  OpenMapOperator op;
  op.spec = spec;
  op.kind = MapKind::baker;
  op.matrix = G.adjoint() * blocks;  // G^{-1} = G^dagger (unitary)
  return op;
}

OpenMapOperator cat_propagator(const TorusSpec& spec) {
  if (spec.chi_q != 0.0 || spec.chi_p != 0.0)
    throw WrongBoundaryPhase("cat map requires periodic phases chi_q = chi_p = 0");
  const int N = spec.N;
  Matrix U(N, N);
  const double amp = 1.0 / std::sqrt(double(N));
  const double quarter = -kPi / 4.0;  // sqrt(-i) branch
#pragma omp parallel for schedule(static)
  for (int Qp = 0; Qp < N; ++Qp)
    for (int Q = 0; Q < N; ++Q) {
      // exponent 2 pi (Q^2 - Q'Q + Q'^2)/N, reduced mod N in exact ints
      long long e = (static_cast<long long>(Q) * Q - static_cast<long long>(Qp) * Q +
                     static_cast<long long>(Qp) * Qp) %
                    N;
      double phase = 2.0 * kPi * e / N + quarter;
      U(Qp, Q) = amp * Complex(std::cos(phase), std::sin(phase));
    }
  OpenMapOperator op;
  op.spec = spec;
  op.kind = MapKind::cat;
  op.matrix = std::move(U);
  return op;
}

Matrix opening_projector(const TorusSpec& spec, const OpeningStrip& strip) {
  Matrix P = Matrix::Zero(spec.N, spec.N);
  for (int j = 0; j < spec.N; ++j)
    P(j, j) = strip.contains(spec.position(j)) ? 0.0 : 1.0;
  return P;
}

OpenMapOperator open_propagator(const OpenMapOperator& U, const OpeningStrip& strip) {
  if (U.is_open()) throw AlreadyOpen();
  OpenMapOperator op;
  op.spec = U.spec;
  op.kind = U.kind;
  op.opening = strip;
  // P U P == masking the rows and columns of opened positions
  op.matrix = U.matrix;
  for (int j = 0; j < U.spec.N; ++j) {
    if (strip.contains(U.spec.position(j))) {
      op.matrix.row(j).setZero();
      op.matrix.col(j).setZero();
    }
  }
  return op;
}

}  // namespace omrl
