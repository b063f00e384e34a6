#pragma once

#include "eqlab/geometry/coherent.hpp"
#include "eqlab/geometry/polynomial.hpp"

namespace eqlab::geometry {

/// H(p, q) = <p,q| H |p,q>, the classical function the weak correspondence principle assigns to H.
template <CoherentFamily F>
double weak_correspondence(const hilbert::OperatorMatrix& H, const CoherentLabel& label, const F& family) {
  H.require_hermitian("weak_correspondence");
  if (!(H.basis() == family.fiducial().basis)) throw ContractViolation("Hamiltonian and family use different bases");
  return hilbert::real_expectation(H, coherent_state(label, family));
}

/// <0| H(P + p, Q + q) |0>: the polynomial with shifted operators, evaluated in the fiducial.
inline double shifted_operator_expectation(const PhasePolynomial& H, const CanonicalFamily& family, double p,
                                           double q) {
  const auto& ops = family.ops();
  const auto Ps = ops.P.shifted(p);
  const auto Qs = ops.Q.shifted(q);
  return H.quantize(Ps, Qs).expectation(family.fiducial().amplitudes).real();
}

}  // namespace eqlab::geometry
