#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "eqlab/core/error.hpp"
#include "eqlab/hilbert/stencil.hpp"
#include "eqlab/hilbert/types.hpp"

namespace eqlab::ultralocal {

struct AffineCurrentOptions {
  double hbar = 1.0;
  double cell_volume = 1.0;  // a^s, the lattice value of delta(0)^-1
  double x_max = 12.0;
  std::vector<std::size_t> grids{500, 1000, 2000, 4000};
  int order = 4;
  std::uint64_t seed = 1;  // sampled field values for the classical bracket
};

struct AffineCurrentReport {
  std::vector<std::size_t> grids;
  std::vector<double> F_prime;           // measured spike coefficient per grid
  std::vector<double> commutator_error;  // max |([phi, kappa] - i hbar a^-s phi) psi| on interior points, per grid
  double classical_bracket_error = 0.0;  // max |{phi, pi phi} - phi| over sampled fields
  double hbar = 1.0;
  double cell_volume = 1.0;

  /// |F' - 3/4| decreases strictly from each grid to the next.
  bool improving() const {
    for (std::size_t i = 1; i < F_prime.size(); ++i)
      if (!(std::abs(F_prime[i] - 0.75) < std::abs(F_prime[i - 1] - 0.75))) return false;
    return true;
  }
};

/// Measures the lattice identity kappa phi^-2 kappa = pi^2 + F' hbar^2 a^-2s phi^-2 on a uniform
/// half-line grid x_j = j h (j = 1..N), with pi = -i hbar a^-s d/dx from a central stencil and
/// kappa = (pi phi + phi pi) / 2. F' is the least-squares coefficient on interior points for the
/// test state psi = x^2 exp(-x^2 / 2).
inline AffineCurrentReport affine_current_check(const AffineCurrentOptions& opts = {}) {
  using namespace hilbert;
  if (!(opts.hbar > 0.0 && opts.cell_volume > 0.0 && opts.x_max > 0.0))
    throw DomainError("affine_current_check: hbar, cell volume and x_max must be positive");
  if (opts.grids.empty()) throw ConfigError("affine_current_check: no grid sizes given");
  AffineCurrentReport rep;
  rep.hbar = opts.hbar;
  rep.cell_volume = opts.cell_volume;
  rep.grids = opts.grids;
  const double ainv = 1.0 / opts.cell_volume;
  for (std::size_t n : opts.grids) {
    if (n < static_cast<std::size_t>(8 * opts.order)) throw ConfigError("affine_current_check: grid too small");
    const double h = opts.x_max / static_cast<double>(n);
    // Real derivative matrix G; pi = -i hbar a^-s G, so pi^2 = -hbar^2 a^-2s G^2 and
    // kappa = -i hbar a^-s S with S = (G X + X G) / 2. Everything below stays real.
    const RSparse G = central_derivative_matrix(n, h, opts.order);
    RVector x(static_cast<Eigen::Index>(n)), psi(static_cast<Eigen::Index>(n));
    for (std::size_t j = 0; j < n; ++j) {
      x(j) = h * static_cast<double>(j + 1);
      psi(j) = x(j) * x(j) * std::exp(-0.5 * x(j) * x(j));
    }
    const RVector Gpsi = G * psi;
    const RVector S_psi = 0.5 * (G * RVector(x.cwiseProduct(psi)) + x.cwiseProduct(Gpsi));
    const RVector mid = S_psi.cwiseQuotient(x.cwiseProduct(x));
    const RVector S_mid = 0.5 * (G * RVector(x.cwiseProduct(mid)) + x.cwiseProduct(G * mid));
    // kappa phi^-2 kappa - pi^2 = -hbar^2 a^-2s (S X^-2 S - G^2)
    const RVector lhs = -opts.hbar * opts.hbar * ainv * ainv * (S_mid - G * Gpsi);
    const RVector basis = opts.hbar * opts.hbar * ainv * ainv * psi.cwiseQuotient(x.cwiseProduct(x));
    const auto lo = static_cast<Eigen::Index>(2 * opts.order + 1);
    const auto hi = static_cast<Eigen::Index>(n) - static_cast<Eigen::Index>(2 * opts.order + 1);
    double num = 0.0, den = 0.0;
    for (Eigen::Index j = lo; j < hi; ++j) {
      num += lhs(j) * basis(j);
      den += basis(j) * basis(j);
    }
    rep.F_prime.push_back(num / den);
    // [phi, kappa] psi = -i hbar a^-s (X S - S X) psi, compared with i hbar a^-s X psi.
    const RVector XS = x.cwiseProduct(S_psi);
    const RVector SX = 0.5 * (G * RVector(x.cwiseProduct(x).cwiseProduct(psi)) + x.cwiseProduct(G * RVector(x.cwiseProduct(psi))));
    double err = 0.0;
    for (Eigen::Index j = lo; j < hi; ++j) {
      const double comm = -opts.hbar * ainv * (XS(j) - SX(j));  // imaginary part; the real part is 0
      err = std::max(err, std::abs(comm - opts.hbar * ainv * x(j) * psi(j)));
    }
    rep.commutator_error.push_back(err);
  }
  // {phi, pi phi} = d(phi)/d(phi) d(pi phi)/d(pi) - d(phi)/d(pi) d(pi phi)/d(phi), by central differences.
  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> U(-3.0, 3.0);
  const double d = 1e-5;
  for (int i = 0; i < 64; ++i) {
    const double phi = U(rng), pi = U(rng);
    auto A = [](double f, double) { return f; };
    auto B = [](double f, double p) { return p * f; };
    const double dA_dphi = (A(phi + d, pi) - A(phi - d, pi)) / (2 * d);
    const double dA_dpi = (A(phi, pi + d) - A(phi, pi - d)) / (2 * d);
    const double dB_dphi = (B(phi + d, pi) - B(phi - d, pi)) / (2 * d);
    const double dB_dpi = (B(phi, pi + d) - B(phi, pi - d)) / (2 * d);
    rep.classical_bracket_error = std::max(rep.classical_bracket_error, std::abs(dA_dphi * dB_dpi - dA_dpi * dB_dphi - phi));
  }
  return rep;
}

}  // namespace eqlab::ultralocal
