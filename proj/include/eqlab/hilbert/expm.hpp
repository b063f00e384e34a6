#pragma once

#include <algorithm>
#include <cmath>

#include <unsupported/Eigen/MatrixFunctions>

#include "eqlab/core/error.hpp"
#include "eqlab/hilbert/types.hpp"

namespace eqlab::hilbert {

/// Dense matrix exponential (scaling and squaring with Pade approximants).
inline CDense expm(const CDense& a) { return a.exp(); }

/// Largest absolute column sum.
inline double norm_one(const CSparse& a) {
  double best = 0.0;
  for (Eigen::Index k = 0; k < a.outerSize(); ++k) {
    double col = 0.0;
    for (CSparse::InnerIterator it(a, k); it; ++it) col += std::abs(it.value());
    best = std::max(best, col);
  }
  return best;
}

/// exp(A) v without forming exp(A): the action is split into s substeps with ||A||_1 / s <= 4,
/// each a Taylor series truncated once the next term drops below tol relative to the sum.
/// A substep norm of 4 keeps the partial sums within e^4 of the result, so cancellation costs
/// under two digits while needing about half the matrix-vector products of unit substeps.
inline CVector expm_multiply(const CSparse& a, const CVector& v, double tol = 1e-16) {
  const double nrm = norm_one(a);
  const int steps = std::max(1, static_cast<int>(std::ceil(nrm / 4.0)));
  const double inv = 1.0 / steps;
  CVector w = v;
  for (int s = 0; s < steps; ++s) {
    CVector term = w;
    CVector sum = w;
    bool converged = false;
    for (int k = 1; k <= 80; ++k) {
      term = (a * term) * (inv / k);
      sum += term;
      if (term.norm() <= tol * sum.norm()) {
        converged = true;
        break;
      }
    }
    if (!converged) throw ConvergenceError("expm_multiply: Taylor series did not converge");
    w = std::move(sum);
  }
  return w;
}

}  // namespace eqlab::hilbert
