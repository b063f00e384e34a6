#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "eqlab/hilbert/eigensolver.hpp"
#include "eqlab/hilbert/operator.hpp"
#include "eqlab/hilbert/stencil.hpp"

namespace eqlab::hilbert {

struct SolverMeta {
  std::size_t dimension = 0;         // grid size or Fock cutoff
  std::string method;
  double residual = 0.0;             // max eigenpair residual of the algebraic problem
  double discretization_error = 0.0; // estimate from a coarser basis; 0 when not estimated
  double e0 = 0.0;                   // ground level before any subtraction
};

struct SpectrumResult {
  std::vector<double> eigenvalues;  // ascending
  bool e0_subtracted = false;
  SolverMeta solver_meta;

  std::vector<double> gaps() const {
    std::vector<double> g;
    for (std::size_t k = 1; k < eigenvalues.size(); ++k) g.push_back(eigenvalues[k] - eigenvalues[k - 1]);
    return g;
  }
};

/// Lowest n_levels eigenvalues of H. With subtract_e0 the ground level is moved to zero, the
/// constant counterterm that removes the zero-point energy.
inline SpectrumResult eigen_spectrum(const OperatorMatrix& H, std::size_t n_levels, bool subtract_e0) {
  H.require_hermitian("eigen_spectrum");
  if (n_levels == 0 || n_levels > H.dimension())
    throw ConfigError("eigen_spectrum: n_levels must be in [1, dimension]");
  const CSparse& m = H.entries();
  bool real = true;
  for (Eigen::Index k = 0; k < m.outerSize() && real; ++k)
    for (CSparse::InnerIterator it(m, k); it; ++it)
      if (it.value().imag() != 0.0) {
        real = false;
        break;
      }

  RVector values;
  SolverMeta meta;
  meta.dimension = H.dimension();
  if (real) {
    const RSparse r = m.real();
    auto pairs = lowest_eigenpairs<double>(r, n_levels);
    values = pairs.values;
    meta.method = pairs.method;
    meta.residual = pairs.max_residual;
  } else {
    auto pairs = lowest_eigenpairs<cplx>(m, n_levels);
    values = pairs.values;
    meta.method = pairs.method;
    meta.residual = pairs.max_residual;
  }
  SpectrumResult out;
  out.eigenvalues.assign(values.data(), values.data() + values.size());
  meta.e0 = out.eigenvalues.front();
  if (subtract_e0) {
    const double e0 = meta.e0;
    for (double& e : out.eigenvalues) e -= e0;
    out.eigenvalues.front() = 0.0;
  }
  out.e0_subtracted = subtract_e0;
  out.solver_meta = meta;
  return out;
}

/// eigen_spectrum on a basis and on one with half the points; the level difference bounds the
/// discretization error of the fine result.
inline SpectrumResult refined_spectrum(const std::function<OperatorMatrix(const BasisSpec&)>& build,
                                       const BasisSpec& basis, std::size_t n_levels, bool subtract_e0) {
  SpectrumResult fine = eigen_spectrum(build(basis), n_levels, subtract_e0);
  const std::size_t coarse_dim = basis.dimension / 2;
  if (coarse_dim >= std::max<std::size_t>(8, n_levels) &&
      (!basis.is_grid() || coarse_dim >= static_cast<std::size_t>(2 * basis.stencil_order))) {
    const SpectrumResult coarse = eigen_spectrum(build(basis.with_dimension(coarse_dim)), n_levels, subtract_e0);
    double err = 0.0;
    for (std::size_t k = 0; k < n_levels; ++k)
      err = std::max(err, std::abs(fine.eigenvalues[k] - coarse.eigenvalues[k]));
    fine.solver_meta.discretization_error = err;
  }
  return fine;
}

/// Spiked oscillator 1/2 (-hbar^2 d^2/dx^2 + F hbar^2 / x^2 + m^2 x^2) on a logarithmic grid,
/// with m = params.mass.
///
/// In the amplitude variable phi(u) = sqrt(x) psi(x), -d^2/dx^2 + (3/4)/x^2 becomes the divergence
/// form -d/du e^{-2u} d/du, discretized as G^T diag(e^{-2u_mid}) G with a staggered gradient G.
/// Dirichlet ghost rows at both ends select the regular branch psi ~ x^{3/2} at the origin.
inline OperatorMatrix spiked_oscillator(const QuantizationParams& params, const BasisSpec& basis,
                                        double spike = 0.75, int staggered_order = 4) {
  params.validate();
  basis.validate();
  if (!basis.is_grid() || basis.grid_scale != GridScale::Logarithmic)
    throw ConfigError("spiked_oscillator requires a logarithmic HalfLineGrid");
  const std::size_t n = basis.dimension;
  const double h = basis.step();
  const double u0 = basis.coordinate(0);
  const auto g = staggered_gradient(n, h, staggered_order, EdgeCondition::Dirichlet, EdgeCondition::Dirichlet);
  RVector weight(static_cast<Eigen::Index>(g.mid.size()));
  for (std::size_t r = 0; r < g.mid.size(); ++r) weight(r) = std::exp(-2.0 * (u0 + g.mid[r] * h));
  const RSparse kinetic = RSparse(g.matrix.transpose()) * weight.asDiagonal() * g.matrix;
  const auto x = basis.nodes();
  const double hb2 = params.hbar * params.hbar;
  const double m2 = params.mass * params.mass;
  RSparse H = (0.5 * hb2) * kinetic;
  for (std::size_t j = 0; j < n; ++j)
    H.coeffRef(j, j) += 0.5 * m2 * x[j] * x[j] + 0.5 * (spike - 0.75) * hb2 / (x[j] * x[j]);
  return {basis, H};
}

}  // namespace eqlab::hilbert
