#pragma once

#include <cmath>

#include "eqlab/hilbert/operator.hpp"
#include "eqlab/hilbert/stencil.hpp"

namespace eqlab::hilbert {

/// Affine pair (Q, D) on a half-line grid.
///
/// Logarithmic grid: the amplitude vector samples phi(u) = sqrt(x) psi(x) at u = ln x, in which
/// D = -i hbar (x d/dx + 1/2) becomes -i hbar d/du. A central difference in u is antisymmetric,
/// so D is Hermitian for the plain Euclidean product of amplitudes.
/// Uniform grid: D = (QP + PQ)/2 with P = -i hbar d/dx by central differences.
struct AffineOps {
  QuantizationParams params;
  BasisSpec basis;
  OperatorMatrix Q;
  OperatorMatrix D;

  /// (Q - 1) + i D / beta~, whose null vector is the affine fiducial.
  OperatorMatrix defining_operator() const {
    return Q.shifted(-1.0) + (kI / params.beta_tilde) * D;
  }
  OperatorMatrix identity() const { return OperatorMatrix::identity(basis); }
};

inline OperatorMatrix grid_position(const BasisSpec& basis) {
  const auto x = basis.nodes();
  return OperatorMatrix::diagonal(basis, Eigen::Map<const RVector>(x.data(), static_cast<Eigen::Index>(x.size())));
}

/// P = -i hbar d/dx on a uniform grid.
inline OperatorMatrix grid_momentum(const QuantizationParams& params, const BasisSpec& basis) {
  basis.validate();
  if (basis.grid_scale != GridScale::Uniform) throw ConfigError("grid_momentum requires a uniform grid");
  const RSparse g = central_derivative_matrix(basis.dimension, basis.step(), basis.stencil_order);
  return {basis, CSparse((-kI * params.hbar) * CSparse(g.cast<cplx>()))};
}

inline AffineOps build_affine_ops(const QuantizationParams& params, const BasisSpec& basis) {
  params.validate();
  if (basis.kind != BasisKind::HalfLineGrid) throw ConfigError("build_affine_ops requires a HalfLineGrid basis");
  basis.validate();
  OperatorMatrix q = grid_position(basis);
  if (basis.grid_scale == GridScale::Logarithmic) {
    const RSparse g = central_derivative_matrix(basis.dimension, basis.step(), basis.stencil_order);
    OperatorMatrix d(basis, CSparse((-kI * params.hbar) * CSparse(g.cast<cplx>())));
    return {params, basis, std::move(q), std::move(d)};
  }
  const OperatorMatrix p = grid_momentum(params, basis);
  OperatorMatrix d = 0.5 * (q * p + p * q);
  return {params, basis, std::move(q), std::move(d)};
}

/// Amplitude vector of a wave function psi(x) on a grid basis: sqrt(w_j) psi(x_j).
template <class Fn>
CVector sample_on_grid(const BasisSpec& basis, Fn&& psi) {
  const auto x = basis.nodes();
  const auto w = basis.cell_weights();
  CVector v(static_cast<Eigen::Index>(x.size()));
  for (std::size_t j = 0; j < x.size(); ++j) v(j) = std::sqrt(w[j]) * cplx(psi(x[j]));
  return v;
}

/// Inverse of sample_on_grid: psi(x_j) = amplitude_j / sqrt(w_j).
inline CVector wavefunction_values(const BasisSpec& basis, const CVector& amplitudes) {
  const auto w = basis.cell_weights();
  CVector psi(amplitudes.size());
  for (Eigen::Index j = 0; j < amplitudes.size(); ++j) psi(j) = amplitudes(j) / std::sqrt(w[j]);
  return psi;
}

}  // namespace eqlab::hilbert
