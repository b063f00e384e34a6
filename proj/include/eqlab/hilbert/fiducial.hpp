#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "eqlab/hilbert/affine.hpp"
#include "eqlab/hilbert/canonical.hpp"
#include "eqlab/hilbert/eigensolver.hpp"
#include "eqlab/hilbert/expm.hpp"

namespace eqlab::hilbert {

enum class FiducialCondition { CanonicalGround, AffineBetaTilde, RotsymZeta };

inline const char* to_string(FiducialCondition c) {
  switch (c) {
    case FiducialCondition::CanonicalGround: return "CanonicalGround";
    case FiducialCondition::AffineBetaTilde: return "AffineBetaTilde";
    case FiducialCondition::RotsymZeta: return "RotsymZeta";
  }
  return "?";
}

struct FiducialVector {
  BasisSpec basis;
  CVector amplitudes;
  FiducialCondition condition = FiducialCondition::CanonicalGround;
  double residual = 0.0;  // sqrt(sum_i ||C_i v||^2) divided by the condition's natural scale
};

struct FiducialOptions {
  double tolerance = 1e-10;
};

/// Rotates v so its largest-magnitude entry is real and positive.
inline void fix_phase(CVector& v) {
  Eigen::Index k = 0;
  v.cwiseAbs().maxCoeff(&k);
  if (std::abs(v(k)) > 0.0) v *= std::conj(v(k)) / std::abs(v(k));
  v(k) = std::abs(v(k));
}

/// Lowest eigenvector of a Hermitian positive semidefinite matrix by inverse iteration with a
/// tiny positive shift. The null direction dominates after two or three solves.
inline CVector inverse_iteration(const CSparse& normal, int max_iterations = 200) {
  const double shift = 1e-14 * std::max(1e-300, norm_one(normal));
  CSparse I(normal.rows(), normal.cols());
  I.setIdentity();
  Eigen::SimplicialLDLT<CSparse> ldlt(normal + cplx(shift) * I);
  if (ldlt.info() != Eigen::Success) throw NumericalError("fiducial: factorization failed");
  CVector v = CVector::Ones(normal.rows()).normalized();
  for (int it = 0; it < max_iterations; ++it) {
    CVector w = ldlt.solve(v);
    w.normalize();
    const double overlap = std::abs(w.dot(v));
    v = std::move(w);
    if (1.0 - overlap < 1e-15) return v;
  }
  throw ConvergenceError("fiducial: inverse iteration did not converge");
}

/// Unit vector minimizing sum_i ||C_i v||^2: the lowest eigenvector of sum_i C_i^dagger C_i.
/// A single condition gives its least-singular vector; several give their common null vector.
inline FiducialVector least_singular_vector(const std::vector<CSparse>& conditions, const BasisSpec& basis,
                                            FiducialCondition kind, double scale, const FiducialOptions& opts) {
  if (conditions.empty()) throw ContractViolation("no fiducial conditions given");
  CSparse normal = CSparse(conditions.front().adjoint()) * conditions.front();
  for (std::size_t i = 1; i < conditions.size(); ++i) normal += CSparse(conditions[i].adjoint()) * conditions[i];
  normal = 0.5 * (normal + CSparse(normal.adjoint()));
  CVector v = inverse_iteration(normal);
  fix_phase(v);
  double r2 = 0.0;
  for (const auto& c : conditions) r2 += (c * v).squaredNorm();
  FiducialVector out{basis, std::move(v), kind, std::sqrt(r2) / scale};
  if (!(out.residual <= opts.tolerance))
    throw NoSolutionError(std::string(to_string(kind)) + ": smallest singular value " + std::to_string(out.residual) +
                          " exceeds tolerance; the basis does not resolve the fiducial");
  return out;
}

/// Canonical fiducial: (omega Q + i P)|0> = 0. The residual is measured in units of sqrt(2 hbar omega).
inline FiducialVector solve_fiducial(const CanonicalOps& ops, const FiducialOptions& opts = {}) {
  return least_singular_vector({ops.annihilator().entries()}, ops.basis, FiducialCondition::CanonicalGround,
                               std::sqrt(2.0 * ops.params.hbar * ops.params.omega), opts);
}

/// Affine fiducial: [(Q - 1) + i D / beta~]|beta~> = 0.
inline FiducialVector solve_fiducial(const AffineOps& ops, const FiducialOptions& opts = {}) {
  return least_singular_vector({ops.defining_operator().entries()}, ops.basis, FiducialCondition::AffineBetaTilde,
                               1.0, opts);
}

/// Affine fiducial from raw parameters. beta~/hbar <= 0 has no normalizable solution.
inline FiducialVector solve_affine_fiducial(const QuantizationParams& params, const BasisSpec& basis,
                                            const FiducialOptions& opts = {}) {
  if (!(params.beta_tilde / params.hbar > 0.0))
    throw NoSolutionError("AffineBetaTilde: beta~/hbar <= 0 gives a non-normalizable fiducial");
  return solve_fiducial(build_affine_ops(params, basis), opts);
}

/// Closed-form affine fiducial psi(x) ~ x^(beta~/hbar - 1/2) exp(-beta~ x / hbar), unnormalized.
inline double affine_fiducial_closed_form(const QuantizationParams& params, double x) {
  const double r = params.beta_tilde / params.hbar;
  return std::exp((r - 0.5) * std::log(x) - r * x);
}

}  // namespace eqlab::hilbert
