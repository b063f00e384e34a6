#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>
#include <type_traits>

#include <Eigen/SparseCholesky>

#include "eqlab/core/error.hpp"
#include "eqlab/hilbert/types.hpp"

namespace eqlab::hilbert {

template <class Scalar>
struct Eigenpairs {
  RVector values;                                         // ascending
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> vectors;  // columns, unit norm
  double max_residual = 0.0;                              // max_k ||H x_k - lambda_k x_k||
  std::string method;
  int iterations = 0;
};

namespace detail {

template <class Scalar>
using DenseOf = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <class Scalar>
DenseOf<Scalar> orthonormal_columns(const DenseOf<Scalar>& y) {
  Eigen::HouseholderQR<DenseOf<Scalar>> qr(y);
  return qr.householderQ() * DenseOf<Scalar>::Identity(y.rows(), y.cols());
}

template <class Scalar>
Scalar random_entry(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  if constexpr (std::is_same_v<Scalar, double>) {
    return g(rng);
  } else {
    const double re = g(rng);
    return Scalar(re, g(rng));
  }
}

}  // namespace detail

/// Lowest n eigenpairs of a Hermitian sparse matrix.
///
/// Small matrices go to a dense self-adjoint solver. Larger ones use shift-invert block subspace
/// iteration with a Rayleigh-Ritz step: the shift sigma is moved below the spectrum until the
/// LDL^T factor of H - sigma has no negative pivots (Sylvester inertia), which makes the
/// smallest eigenvalues the dominant ones of (H - sigma)^-1. Grid Hamiltonians with a 1/x^2
/// spike have norms near 1e13, so solvers whose error scales with eps*||H|| are unusable here.
template <class Scalar>
Eigenpairs<Scalar> lowest_eigenpairs(const Eigen::SparseMatrix<Scalar>& H, std::size_t n, double tol = 1e-13,
                                     int max_iterations = 2000) {
  using Dense = detail::DenseOf<Scalar>;
  const auto dim = static_cast<std::size_t>(H.rows());
  if (n == 0 || n > dim) throw ConfigError("requested eigenpair count is outside [1, dimension]");

  Eigenpairs<Scalar> out;
  auto finish_residual = [&](const Dense& X) {
    double r = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const auto x = X.col(static_cast<Eigen::Index>(k));
      r = std::max(r, (H * x - out.values(k) * x).norm());
    }
    out.max_residual = r;
  };

  if (dim <= 256) {
    Eigen::SelfAdjointEigenSolver<Dense> es{Dense(H)};
    if (es.info() != Eigen::Success) throw ConvergenceError("dense eigensolver failed");
    out.values = es.eigenvalues().head(static_cast<Eigen::Index>(n));
    out.vectors = es.eigenvectors().leftCols(static_cast<Eigen::Index>(n));
    out.method = "dense-selfadjoint";
    finish_residual(out.vectors);
    return out;
  }

  Eigen::SparseMatrix<Scalar> I(H.rows(), H.cols());
  I.setIdentity();
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<Scalar>> ldlt;
  // Start below the Gershgorin-free guess -1 scaled by the diagonal minimum, then lower until
  // H - sigma is positive definite.
  double sigma = -1.0;
  {
    double dmin = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < H.rows(); ++i) dmin = std::min(dmin, std::real(H.coeff(i, i)));
    if (dmin - 1.0 < sigma) sigma = dmin - 1.0;
  }
  for (int attempt = 0;; ++attempt) {
    ldlt.compute(H - Scalar(sigma) * I);
    bool positive = ldlt.info() == Eigen::Success;
    if (positive) {
      const auto& d = ldlt.vectorD();
      for (Eigen::Index i = 0; i < d.size(); ++i)
        if (!(std::real(d(i)) > 0.0)) {
          positive = false;
          break;
        }
    }
    if (positive) break;
    if (attempt > 200) throw ConvergenceError("could not find a shift below the spectrum");
    sigma = sigma * 2.0 - 1.0;
  }

  const std::size_t block = std::min(dim, std::max<std::size_t>(2 * n + 4, n + 8));
  std::mt19937_64 rng(0x5eed);
  Dense X(dim, block);
  for (std::size_t j = 0; j < block; ++j)
    for (std::size_t i = 0; i < dim; ++i) X(i, j) = detail::random_entry<Scalar>(rng);
  X = detail::orthonormal_columns<Scalar>(X);

  RVector previous = RVector::Constant(static_cast<Eigen::Index>(n), std::numeric_limits<double>::infinity());
  int stable = 0;
  for (int it = 1; it <= max_iterations; ++it) {
    // Rayleigh-Ritz on (H - sigma)^-1 rather than on H: its entries are bounded by the inverse
    // gap, so roundoff stays relative to the small eigenvalues instead of to ||H||.
    Dense Z(dim, block);
    for (std::size_t j = 0; j < block; ++j) Z.col(j) = ldlt.solve(X.col(j));
    Dense T = X.adjoint() * Z;
    T = (T + T.adjoint().eval()) * 0.5;
    Eigen::SelfAdjointEigenSolver<Dense> es(T);
    // Largest mu first, so lambda = sigma + 1/mu ascends.
    const Dense V = es.eigenvectors().rowwise().reverse();
    const RVector mu = es.eigenvalues().reverse();
    const Dense ritz = X * V;
    X = detail::orthonormal_columns<Scalar>(Dense(Z * V));
    RVector values(static_cast<Eigen::Index>(n));
    for (Eigen::Index k = 0; k < values.size(); ++k) values(k) = sigma + 1.0 / mu(k);
    double change = 0.0;
    for (Eigen::Index k = 0; k < values.size(); ++k)
      change = std::max(change, std::abs(values(k) - previous(k)) / std::max(1.0, std::abs(values(k))));
    previous = values;
    stable = change <= tol ? stable + 1 : 0;
    if (stable >= 2) {
      out.values = values;
      out.vectors = ritz.leftCols(static_cast<Eigen::Index>(n));
      out.method = "shift-invert-subspace";
      out.iterations = it;
      finish_residual(out.vectors);
      return out;
    }
  }
  throw ConvergenceError("shift-invert subspace iteration did not converge");
}

}  // namespace eqlab::hilbert
