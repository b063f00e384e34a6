#pragma once

#include <cmath>
#include <vector>

#include "eqlab/hilbert/operator.hpp"

namespace eqlab::hilbert {

/// Truncated Fock annihilator: a|n> = sqrt(n)|n-1>.
inline RSparse annihilation_matrix(std::size_t d) {
  std::vector<RTriplet> t;
  for (std::size_t n = 1; n < d; ++n) t.emplace_back(n - 1, n, std::sqrt(static_cast<double>(n)));
  RSparse a(d, d);
  a.setFromTriplets(t.begin(), t.end());
  return a;
}

/// Canonical pair on a truncated Fock basis. The ladder length scale uses the basis mass
/// and frequency: Q = sqrt(hbar/(2 m omega)) (a + a^dagger), P = i sqrt(hbar m omega / 2) (a^dagger - a).
struct CanonicalOps {
  QuantizationParams params;
  BasisSpec basis;
  OperatorMatrix Q;
  OperatorMatrix P;

  /// omega Q + i P, whose null vector is the canonical fiducial.
  OperatorMatrix annihilator() const { return params.omega * Q + kI * P; }
  OperatorMatrix identity() const { return OperatorMatrix::identity(basis); }
};

inline CanonicalOps build_canonical_ops(const QuantizationParams& params, const BasisSpec& basis) {
  params.validate();
  basis.validate();
  if (basis.kind != BasisKind::Fock) throw ConfigError("build_canonical_ops requires a Fock basis");
  const RSparse a = annihilation_matrix(basis.dimension);
  const RSparse ad = a.transpose();
  const double mw = params.mass * params.omega;
  const double xq = std::sqrt(params.hbar / (2.0 * mw));
  const double xp = std::sqrt(params.hbar * mw / 2.0);
  CSparse q = (xq * (a + ad)).cast<cplx>();
  CSparse p = (kI * xp) * CSparse((ad - a).cast<cplx>());
  return {params, basis, OperatorMatrix(basis, std::move(q)), OperatorMatrix(basis, std::move(p))};
}

/// 1/2 (P^2 + omega^2 Q^2).
inline OperatorMatrix harmonic_hamiltonian(const CanonicalOps& ops, double omega) {
  return (0.5 * (ops.P * ops.P + (omega * omega) * (ops.Q * ops.Q))).hermitian_part();
}

/// :1/2 (P^2 + omega^2 Q^2): = A^dagger A / 2 with A = omega Q + i P the sector's annihilator.
inline OperatorMatrix normal_ordered_harmonic(const CanonicalOps& ops) {
  const OperatorMatrix A = ops.annihilator();
  return (0.5 * (A.adjoint() * A)).hermitian_part();
}

/// Projector that removes the top Fock level, where truncation spoils operator identities.
inline OperatorMatrix below_cutoff_projector(const BasisSpec& basis) {
  RVector d = RVector::Ones(basis.dimension);
  d(basis.dimension - 1) = 0.0;
  return OperatorMatrix::diagonal(basis, d);
}

}  // namespace eqlab::hilbert
