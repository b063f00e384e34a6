#pragma once

#include <cmath>
#include <vector>

#include <unsupported/Eigen/KroneckerProduct>

#include "eqlab/hilbert/canonical.hpp"
#include "eqlab/hilbert/spectrum.hpp"
#include "eqlab/rotsym/model.hpp"

namespace eqlab::rotsym {

struct LevelCluster {
  double energy = 0.0;
  std::size_t degeneracy = 0;
};

struct CqComparison {
  std::vector<double> levels;            // lowest levels of the naive CQ operator, ascending
  std::vector<LevelCluster> clusters;    // levels grouped within the clustering tolerance
  std::vector<double> free_reference;    // hbar m0 (k + N/2) for the lambda0 = 0 operator
  std::size_t cutoff = 0;
  double discretization_error = 0.0;     // level change against cutoff - 2
};

/// Groups sorted levels whose neighbours differ by at most tol (relative to max(1, |E|)).
inline std::vector<LevelCluster> cluster_levels(const std::vector<double>& levels, double tol) {
  std::vector<LevelCluster> out;
  for (double e : levels) {
    if (!out.empty() && std::abs(e - out.back().energy) <= tol * std::max(1.0, std::abs(e))) {
      auto& c = out.back();
      c.energy = (c.energy * static_cast<double>(c.degeneracy) + e) / static_cast<double>(c.degeneracy + 1);
      ++c.degeneracy;
    } else {
      out.push_back({e, 1});
    }
  }
  return out;
}

/// Naive canonical promotion of the classical model,
///   H = 1/2 sum (P_n^2 + m0^2 Q_n^2) + lambda0 (sum Q_n^2)^2,
/// on a product of truncated Fock spaces whose ladder frequency is m0. The CQ levels are
/// reported with their degeneracies. This is a comparison without reference numbers.
inline CqComparison compare_cq_spectrum(const RotSymModel& model, std::size_t cutoff, std::size_t n_levels) {
  model.validate();
  if (model.n_dof > 3) throw ConfigError("compare_cq_spectrum supports N <= 3");
  if (cutoff < 8 || cutoff > 24) throw ConfigError("compare_cq_spectrum cutoff must be in [8, 24]");
  auto build = [&](std::size_t c) {
    const std::size_t n = model.n_dof;
    const double m0 = std::sqrt(model.m0_sq());
    const hilbert::RSparse a = hilbert::annihilation_matrix(c);
    const hilbert::RSparse ad = a.transpose();
    hilbert::RSparse id(c, c);
    id.setIdentity();
    const hilbert::RSparse x = std::sqrt(model.hbar / (2.0 * m0)) * hilbert::RSparse(a + ad);
    const hilbert::RSparse x2 = x * x;
    // Single-mode number operator gives 1/2 (P^2 + m0^2 Q^2) = hbar m0 (N + 1/2) below the cutoff,
    // and avoids the corrupted top level of a truncated P^2.
    hilbert::RSparse num(c, c);
    for (std::size_t k = 0; k < c; ++k) num.insert(k, k) = model.hbar * m0 * (static_cast<double>(k) + 0.5);
    auto embed = [&](const hilbert::RSparse& op, std::size_t axis) {
      hilbert::RSparse out(1, 1);
      out.insert(0, 0) = 1.0;
      for (std::size_t k = n; k-- > 0;) {
        const hilbert::RSparse& f = k == axis ? op : id;
        out = Eigen::kroneckerProduct(out, f).eval();
      }
      return out;
    };
    std::size_t dim = 1;
    for (std::size_t k = 0; k < n; ++k) dim *= c;
    hilbert::RSparse H(dim, dim), q2sum(dim, dim);
    for (std::size_t k = 0; k < n; ++k) {
      H += embed(num, k);
      q2sum += embed(x2, k);
    }
    H += model.lambda0() * hilbert::RSparse(q2sum * q2sum);
    hilbert::RSparse sym = 0.5 * (H + hilbert::RSparse(H.transpose()));
    return hilbert::OperatorMatrix(hilbert::BasisSpec::fock(dim), sym);
  };
  CqComparison out;
  out.cutoff = cutoff;
  const auto fine = hilbert::eigen_spectrum(build(cutoff), n_levels, false);
  const auto coarse = hilbert::eigen_spectrum(build(cutoff - 2), n_levels, false);
  out.levels = fine.eigenvalues;
  for (std::size_t k = 0; k < n_levels; ++k)
    out.discretization_error = std::max(out.discretization_error, std::abs(fine.eigenvalues[k] - coarse.eigenvalues[k]));
  // Truncation splits symmetry multiplets by about the discretization error, so clusters are
  // formed at ten times that.
  out.clusters = cluster_levels(out.levels, std::max(1e-8, 10.0 * out.discretization_error));
  const double m0 = std::sqrt(model.m0_sq());
  for (std::size_t k = 0; out.free_reference.size() < out.clusters.size(); ++k)
    out.free_reference.push_back(model.hbar * m0 * (static_cast<double>(k) + 0.5 * static_cast<double>(model.n_dof)));
  return out;
}

}  // namespace eqlab::rotsym
