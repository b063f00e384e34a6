#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "eqlab/hilbert/eigensolver.hpp"
#include "eqlab/hilbert/stencil.hpp"

namespace eqlab::ultralocal {

/// -(p y')' + q y = E w y on a uniform grid, discretized in the energy form
/// h G^T diag(p_mid) G + h diag(q) against the lumped mass h diag(w), with a staggered gradient G.
/// Masses of the regions beyond the grid ends can be folded into the end nodes.
struct SturmLiouvilleProblem {
  double u_lo = 0.0;
  double u_hi = 1.0;
  std::size_t points = 2000;
  std::function<double(double)> p, q, w;
  hilbert::EdgeCondition left = hilbert::EdgeCondition::Neumann;
  hilbert::EdgeCondition right = hilbert::EdgeCondition::Dirichlet;
  double left_tail_weight = 0.0;     // added to the mass of node 0
  double left_tail_potential = 0.0;  // added to the potential of node 0
  int order = 4;

  double step() const { return (u_hi - u_lo) / static_cast<double>(points - 1); }
  double node(std::size_t j) const { return u_lo + step() * static_cast<double>(j); }
};

struct SturmLiouvilleSolution {
  hilbert::RVector values;
  hilbert::RDense vectors;  // columns y_k at the nodes, normalized by sum_j mass_j y_j^2 = 1
  hilbert::RVector mass;    // lumped mass per node (including folded tails)
  double residual = 0.0;
  std::string method;
};

inline SturmLiouvilleSolution solve_sturm_liouville(const SturmLiouvilleProblem& prob, std::size_t n_levels) {
  using namespace hilbert;
  const std::size_t n = prob.points;
  const double h = prob.step();
  const auto g = staggered_gradient(n, h, prob.order, prob.left, prob.right);
  RVector pm(static_cast<Eigen::Index>(g.mid.size()));
  for (std::size_t r = 0; r < g.mid.size(); ++r) pm(r) = h * prob.p(prob.u_lo + g.mid[r] * h);
  RSparse K = RSparse(g.matrix.transpose()) * pm.asDiagonal() * g.matrix;
  RVector mass(static_cast<Eigen::Index>(n));
  for (std::size_t j = 0; j < n; ++j) {
    const double u = prob.node(j);
    K.coeffRef(j, j) += h * prob.q(u);
    mass(j) = h * prob.w(u);
  }
  K.coeffRef(0, 0) += prob.left_tail_potential;
  mass(0) += prob.left_tail_weight;
  const RVector s = mass.cwiseSqrt().cwiseInverse();
  RSparse A = s.asDiagonal() * K * s.asDiagonal();
  A = 0.5 * (A + RSparse(A.transpose()));
  auto pairs = lowest_eigenpairs<double>(A, n_levels);
  SturmLiouvilleSolution out;
  out.values = pairs.values;
  out.vectors = s.asDiagonal() * pairs.vectors;
  for (Eigen::Index k = 0; k < out.vectors.cols(); ++k) {
    // Sign convention: the largest-magnitude entry is positive.
    Eigen::Index imax = 0;
    out.vectors.col(k).cwiseAbs().maxCoeff(&imax);
    if (out.vectors(imax, k) < 0.0) out.vectors.col(k) *= -1.0;
  }
  out.mass = std::move(mass);
  out.residual = pairs.max_residual;
  out.method = pairs.method;
  return out;
}

}  // namespace eqlab::ultralocal
