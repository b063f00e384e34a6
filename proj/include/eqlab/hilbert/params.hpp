#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "eqlab/core/error.hpp"

namespace eqlab::hilbert {

/// Physical constants of one quantization: hbar, the canonical fiducial frequency omega,
/// the affine fiducial parameter beta~ and a mass (m or m0 depending on the model).
struct QuantizationParams {
  double hbar = 1.0;
  double omega = 1.0;
  double beta_tilde = 1.0;
  double mass = 1.0;

  void validate() const {
    auto positive = [](double v, const char* name) {
      if (!(std::isfinite(v) && v > 0.0))
        throw DomainError(std::string("QuantizationParams.") + name + " must be finite and > 0");
    };
    positive(hbar, "hbar");
    positive(omega, "omega");
    positive(beta_tilde, "beta_tilde");
    positive(mass, "mass");
  }

  /// sqrt(hbar / (m omega)): width scale of canonical ground states.
  double canonical_length() const { return std::sqrt(hbar / (mass * omega)); }
  /// hbar / beta~: scale of the affine fiducial.
  double affine_length() const { return hbar / beta_tilde; }
};

enum class BasisKind { Fock, HalfLineGrid };
enum class GridScale { Uniform, Logarithmic };

/// Computational basis. A HalfLineGrid stores amplitudes sqrt(w_j) psi(x_j), where w_j is
/// the cell weight (x_j h on a logarithmic grid, h on a uniform one), so the plain Euclidean
/// inner product of amplitude vectors is the L2(0, inf) inner product.
struct BasisSpec {
  BasisKind kind = BasisKind::Fock;
  std::size_t dimension = 128;
  double grid_lo = 0.0;
  double grid_hi = 0.0;
  GridScale grid_scale = GridScale::Logarithmic;
  int stencil_order = 8;

  static BasisSpec fock(std::size_t cutoff) {
    BasisSpec b;
    b.kind = BasisKind::Fock;
    b.dimension = cutoff;
    return b;
  }

  static BasisSpec half_line(std::size_t points, double lo, double hi,
                             GridScale scale = GridScale::Logarithmic, int order = 8) {
    BasisSpec b;
    b.kind = BasisKind::HalfLineGrid;
    b.dimension = points;
    b.grid_lo = lo;
    b.grid_hi = hi;
    b.grid_scale = scale;
    b.stencil_order = order;
    return b;
  }

  bool is_grid() const { return kind == BasisKind::HalfLineGrid; }

  void validate() const {
    if (dimension < 8) throw ConfigError("BasisSpec.dimension must be >= 8");
    if (stencil_order < 2 || stencil_order > 12 || stencil_order % 2 != 0)
      throw ConfigError("BasisSpec.stencil_order must be even and in [2, 12]");
    if (kind == BasisKind::HalfLineGrid) {
      if (!(grid_lo > 0.0)) throw DomainError("HalfLineGrid requires grid_lo > 0 (affine sector needs Q > 0)");
      if (!(grid_hi > grid_lo)) throw ConfigError("HalfLineGrid requires grid_hi > grid_lo");
      if (dimension < static_cast<std::size_t>(2 * stencil_order))
        throw ConfigError("HalfLineGrid has fewer points than the stencil needs");
    }
  }

  /// Uniform step in the grid coordinate (u = ln x for logarithmic grids, x otherwise).
  double step() const {
    const double span = grid_scale == GridScale::Logarithmic ? std::log(grid_hi / grid_lo) : grid_hi - grid_lo;
    return span / static_cast<double>(dimension - 1);
  }

  /// Grid coordinate of node j (u_j or x_j).
  double coordinate(std::size_t j) const {
    const double origin = grid_scale == GridScale::Logarithmic ? std::log(grid_lo) : grid_lo;
    return origin + step() * static_cast<double>(j);
  }

  std::vector<double> nodes() const {
    std::vector<double> x(dimension);
    for (std::size_t j = 0; j < dimension; ++j)
      x[j] = grid_scale == GridScale::Logarithmic ? std::exp(coordinate(j)) : coordinate(j);
    return x;
  }

  std::vector<double> cell_weights() const {
    std::vector<double> w(dimension, step());
    if (grid_scale == GridScale::Logarithmic) {
      const auto x = nodes();
      for (std::size_t j = 0; j < dimension; ++j) w[j] *= x[j];
    }
    return w;
  }

  /// Same interval and stencil with a different number of points.
  BasisSpec with_dimension(std::size_t n) const {
    BasisSpec b = *this;
    b.dimension = n;
    return b;
  }

  /// Number of boundary nodes on each side where a stencil reaches outside the grid.
  std::size_t boundary_width() const {
    return kind == BasisKind::HalfLineGrid ? static_cast<std::size_t>(stencil_order / 2) : 1;
  }

  friend bool operator==(const BasisSpec&, const BasisSpec&) = default;
};

inline BasisSpec default_fock_basis() { return BasisSpec::fock(128); }

/// Log grid for the affine sector: [l * min(1e-4, 1e-14^(hbar/beta~)), 40 l], l = hbar/beta~.
/// The lower end pushes the fiducial's x^(beta~/hbar) amplitude below 1e-14 at the boundary.
inline BasisSpec default_affine_basis(const QuantizationParams& params, std::size_t points = 2000) {
  const double ell = params.affine_length();
  const double lo = ell * std::min(1e-4, std::pow(1e-14, params.hbar / params.beta_tilde));
  return BasisSpec::half_line(points, lo, 40.0 * ell);
}

/// Log grid [1e-4 l, 40 l] with l = sqrt(hbar / (m omega)), used for the spiked oscillator.
inline BasisSpec default_spiked_basis(const QuantizationParams& params, std::size_t points = 2000) {
  const double ell = std::sqrt(params.hbar / params.mass);
  return BasisSpec::half_line(points, 1e-4 * ell, 40.0 * ell);
}

inline const char* to_string(BasisKind k) { return k == BasisKind::Fock ? "FockBasis" : "HalfLineGrid"; }
inline const char* to_string(GridScale s) { return s == GridScale::Uniform ? "Uniform" : "Logarithmic"; }

}  // namespace eqlab::hilbert
