#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "eqlab/core/error.hpp"
#include "eqlab/hilbert/types.hpp"

namespace eqlab::hilbert {

/// Antisymmetric central first-derivative weights c_1..c_p (order 2p):
/// f'(x) ~ sum_k c_k (f(x+kh) - f(x-kh)) / h.
inline std::vector<double> central_first_derivative_weights(int order) {
  if (order < 2 || order % 2 != 0) throw ConfigError("stencil order must be even and >= 2");
  const int p = order / 2;
  RDense A(p, p);
  RVector rhs = RVector::Zero(p);
  for (int i = 0; i < p; ++i)
    for (int k = 1; k <= p; ++k) A(i, k - 1) = std::pow(static_cast<double>(k), 2 * i + 1);
  rhs(0) = 0.5;
  const RVector c = A.fullPivLu().solve(rhs);
  return {c.data(), c.data() + p};
}

/// Staggered first-derivative weights d_1..d_p (order 2p) for a midpoint between two nodes:
/// f'(mid) ~ sum_k d_k (f(mid+(k-1/2)h) - f(mid-(k-1/2)h)) / h.
inline std::vector<double> staggered_first_derivative_weights(int order) {
  if (order < 2 || order % 2 != 0) throw ConfigError("stencil order must be even and >= 2");
  const int p = order / 2;
  RDense A(p, p);
  RVector rhs = RVector::Zero(p);
  for (int i = 0; i < p; ++i)
    for (int k = 1; k <= p; ++k) A(i, k - 1) = 2.0 * std::pow(k - 0.5, 2 * i + 1);
  rhs(0) = 1.0;
  const RVector d = A.fullPivLu().solve(rhs);
  return {d.data(), d.data() + p};
}

/// n x n central derivative matrix with zero extension outside the grid. Antisymmetric,
/// so -i*hbar times it is Hermitian.
inline RSparse central_derivative_matrix(std::size_t n, double h, int order) {
  const auto c = central_first_derivative_weights(order);
  std::vector<RTriplet> t;
  t.reserve(n * c.size() * 2);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 1; k <= c.size(); ++k) {
      if (j + k < n) t.emplace_back(j, j + k, c[k - 1] / h);
      if (j >= k) t.emplace_back(j, j - k, -c[k - 1] / h);
    }
  }
  RSparse m(n, n);
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

/// How a staggered gradient treats the region beyond a grid end.
///  Dirichlet: the function vanishes half a step beyond the end node (ghost nodes are zero,
///             and the boundary midpoint row is kept).
///  Neumann:   the function is mirrored about the boundary midpoint (even reflection), whose
///             derivative is then zero, so that row is dropped.
enum class EdgeCondition { Dirichlet, Neumann };

struct StaggeredGradient {
  RSparse matrix;            // rows = midpoints kept, cols = nodes
  std::vector<double> mid;   // grid coordinate offset of each row, in units of h from node 0
};

/// Gradient from n nodes to the midpoints j + 1/2 for j = -1..n-1 (n + 1 midpoints before
/// boundary rows are dropped).
inline StaggeredGradient staggered_gradient(std::size_t n, double h, int order, EdgeCondition left,
                                            EdgeCondition right) {
  const auto d = staggered_first_derivative_weights(order);
  const long N = static_cast<long>(n);
  auto reflect = [&](long k) -> long {
    if (k < 0) return left == EdgeCondition::Neumann ? -k - 1 : -1;
    if (k >= N) return right == EdgeCondition::Neumann ? 2 * N - 1 - k : -1;
    return k;
  };
  std::vector<RTriplet> t;
  std::vector<double> mid;
  long row = 0;
  for (long j = -1; j < N; ++j) {
    if (j == -1 && left == EdgeCondition::Neumann) continue;
    if (j == N - 1 && right == EdgeCondition::Neumann) continue;
    for (long k = 1; k <= static_cast<long>(d.size()); ++k) {
      const long hi = reflect(j + k);
      const long lo = reflect(j + 1 - k);
      if (hi >= 0 && hi < N) t.emplace_back(row, hi, d[k - 1] / h);
      if (lo >= 0 && lo < N) t.emplace_back(row, lo, -d[k - 1] / h);
    }
    mid.push_back(static_cast<double>(j) + 0.5);
    ++row;
  }
  RSparse m(row, N);
  m.setFromTriplets(t.begin(), t.end());
  return {std::move(m), std::move(mid)};
}

}  // namespace eqlab::hilbert
