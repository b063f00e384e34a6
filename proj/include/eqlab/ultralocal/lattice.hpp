#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "eqlab/core/error.hpp"

namespace eqlab::ultralocal {

/// How lattice couplings depend on the spacing.
///  Bare:         the site Hamiltonian uses m0 and lambda0 as written.
///  Renormalized: CQ uses the quartic coupling lambda0 * b * a^s; EQ uses the mass b a^s m0 and the
///                quartic lambda0 (b a^s)^4. Both keep the per-site distribution of phi a^s / hbar at
///                a fixed shape, scaled by a^(s/2).
enum class LatticeScheme { Bare, Renormalized };

inline const char* to_string(LatticeScheme s) { return s == LatticeScheme::Bare ? "bare" : "renormalized"; }

struct LatticeSpec {
  int s = 1;
  double a = 0.1;
  std::size_t K = 10;
  double b = 1.0;
  double m0 = 1.0;
  double lambda0 = 0.0;
  double hbar = 1.0;
  LatticeScheme scheme = LatticeScheme::Bare;

  void validate() const {
    if (s < 1 || s > 3) throw ConfigError("LatticeSpec.s must be 1, 2 or 3");
    if (!(std::isfinite(a) && a > 0.0)) throw DomainError("LatticeSpec.a must be > 0");
    if (K == 0) throw ConfigError("LatticeSpec.K must be >= 1");
    if (!(std::isfinite(b) && b > 0.0)) throw DomainError("LatticeSpec.b must be > 0");
    if (!(std::isfinite(m0) && m0 > 0.0)) throw DomainError("LatticeSpec.m0 must be > 0");
    if (!(std::isfinite(lambda0) && lambda0 >= 0.0)) throw DomainError("LatticeSpec.lambda0 must be >= 0");
    if (!(std::isfinite(hbar) && hbar > 0.0)) throw DomainError("LatticeSpec.hbar must be > 0");
    if (!(b * cell_volume() < 1.0)) throw DomainError("LatticeSpec requires b a^s < 1");
  }

  /// a^s
  double cell_volume() const { return std::pow(a, s); }
  /// epsilon = b a^s, the regularization parameter of the affine site model.
  double epsilon() const { return b * cell_volume(); }
  /// K a^s
  double volume() const { return static_cast<double>(K) * cell_volume(); }
  /// Sites per side of the hypercube (K must be a perfect s-th power).
  std::size_t side() const {
    const auto n = static_cast<std::size_t>(std::llround(std::pow(static_cast<double>(K), 1.0 / s)));
    std::size_t k = 1;
    for (int i = 0; i < s; ++i) k *= n;
    if (k != K) throw ConfigError("LatticeSpec.K must be a perfect s-th power");
    return n;
  }
};

/// F = (1/2 - b a^s)(3/2 - b a^s), the regularized coefficient of the affine spike.
inline double regularized_F(const LatticeSpec& spec) {
  const double e = spec.epsilon();
  return (0.5 - e) * (1.5 - e);
}

enum class SiteKind { CanonicalQuartic, AffineSpiked };

struct SiteModel {
  SiteKind kind = SiteKind::CanonicalQuartic;
  double F = 0.75;
  double e0 = 0.0;
};

/// H_K = sum_k [1/2 (pi_k^2 + m0^2 phi_k^2) + lambda0 phi_k^4] a^s
inline double classical_lattice_hamiltonian(const LatticeSpec& spec, const std::vector<double>& pi,
                                            const std::vector<double>& phi) {
  spec.validate();
  if (pi.size() != spec.K || phi.size() != spec.K)
    throw ContractViolation("classical_lattice_hamiltonian: field length differs from K");
  double sum = 0.0;
  for (std::size_t k = 0; k < spec.K; ++k) {
    const double f2 = phi[k] * phi[k];
    sum += 0.5 * (pi[k] * pi[k] + spec.m0 * spec.m0 * f2) + spec.lambda0 * f2 * f2;
  }
  return sum * spec.cell_volume();
}

/// Site centres x_k = (i + 1/2) a per axis, axis 0 varying fastest.
inline std::vector<std::vector<double>> site_positions(const LatticeSpec& spec) {
  const std::size_t n = spec.side();
  std::vector<std::vector<double>> out(spec.K, std::vector<double>(static_cast<std::size_t>(spec.s)));
  for (std::size_t k = 0; k < spec.K; ++k) {
    std::size_t r = k;
    for (int d = 0; d < spec.s; ++d) {
      out[k][static_cast<std::size_t>(d)] = (static_cast<double>(r % n) + 0.5) * spec.a;
      r /= n;
    }
  }
  return out;
}

/// Test function values f_k on the lattice sites.
struct TestFunction {
  std::vector<double> samples;
  std::string description;

  TestFunction scaled(double theta) const {
    TestFunction t = *this;
    for (double& v : t.samples) v *= theta;
    return t;
  }
};

/// A smooth function of position together with a name, sampled onto any lattice.
struct FieldFunction {
  std::function<double(const std::vector<double>&)> fn;
  std::string description;

  TestFunction sample(const LatticeSpec& spec) const {
    TestFunction t;
    t.description = description;
    for (const auto& x : site_positions(spec)) t.samples.push_back(fn(x));
    return t;
  }
};

}  // namespace eqlab::ultralocal
