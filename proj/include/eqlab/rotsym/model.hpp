#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "eqlab/core/error.hpp"

namespace eqlab::rotsym {

/// The rotationally symmetric model with N degrees of freedom. The quantum construction
/// uses a second canonical pair (R_n, S_n) per degree of freedom and a fiducial tied to zeta.
struct RotSymModel {
  std::size_t n_dof = 1;
  double m = 1.0;
  double zeta = 0.5;
  double v = 0.0;
  double hbar = 1.0;

  void validate() const {
    if (n_dof == 0) throw ConfigError("RotSymModel.n_dof must be >= 1");
    if (!(std::isfinite(m) && m > 0.0)) throw DomainError("RotSymModel.m must be > 0");
    // zeta = 0 is the decoupled free limit; the fiducial stops being normalizable at zeta = 1.
    if (!(zeta >= 0.0 && zeta < 1.0)) throw DomainError("RotSymModel.zeta must lie in [0, 1)");
    if (!(std::isfinite(v) && v >= 0.0)) throw DomainError("RotSymModel.v must be >= 0");
    if (!(std::isfinite(hbar) && hbar > 0.0)) throw DomainError("RotSymModel.hbar must be > 0");
  }

  /// m0^2 = m^2 (1 + zeta^2)
  double m0_sq() const { return m * m * (1.0 + zeta * zeta); }
  /// lambda0 = v zeta^4 m^4
  double lambda0() const { return v * std::pow(zeta, 4) * std::pow(m, 4); }
};

struct PhasePoint {
  std::vector<double> p;
  std::vector<double> q;

  void check(std::size_t n) const {
    if (p.size() != n || q.size() != n)
      throw ContractViolation("PhasePoint has length (" + std::to_string(p.size()) + ", " + std::to_string(q.size()) +
                              "), model has N = " + std::to_string(n));
  }
};

/// H(p, q) = 1/2 sum [p_n^2 + m0^2 q_n^2] + lambda0 (sum q_n^2)^2
inline double classical_hamiltonian(const RotSymModel& model, const PhasePoint& x) {
  model.validate();
  x.check(model.n_dof);
  double kinetic = 0.0, q2 = 0.0;
  for (std::size_t n = 0; n < model.n_dof; ++n) {
    kinetic += x.p[n] * x.p[n];
    q2 += x.q[n] * x.q[n];
  }
  return 0.5 * (kinetic + model.m0_sq() * q2) + model.lambda0() * q2 * q2;
}

/// Coherent-state expectation of the normal-ordered quantum Hamiltonian.
///
/// With A_n = m(Q_n + zeta S_n) + i P_n and B_n = m(S_n + zeta Q_n) + i R_n, the quantum
/// Hamiltonian is 1/2 sum (A_n^+ A_n + B_n^+ B_n) + v sum_{n,n'} B_n^+ B_n'^+ B_n' B_n, because
/// P^2 + m^2 (Q + zeta S)^2 normal-ordered is A^+ A (likewise for B). A and B commute with each
/// other's adjoints and both annihilate |zeta>. The displacement shifts Q_n by q_n and P_n by p_n
/// and leaves S_n, R_n alone, so A_n -> A_n + alpha_n and B_n -> B_n + beta_n with
/// alpha_n = m q_n + i p_n and beta_n = m zeta q_n. Every normal-ordered monomial then evaluates to
/// its c-number image:
///   H = 1/2 sum (|alpha_n|^2 + |beta_n|^2) + v (sum |beta_n|^2)^2,
/// which is the classical Hamiltonian with m0^2 = m^2 (1 + zeta^2) and lambda0 = v zeta^4 m^4.
/// The overall scale of A_n, B_n does not matter for normal-ordered expectations.
inline double eq_weak_correspondence(const RotSymModel& model, const PhasePoint& x) {
  model.validate();
  x.check(model.n_dof);
  double quadratic = 0.0, beta2 = 0.0;
  for (std::size_t n = 0; n < model.n_dof; ++n) {
    const double alpha_re = model.m * x.q[n];
    const double alpha_im = x.p[n];
    const double beta = model.m * model.zeta * x.q[n];
    quadratic += alpha_re * alpha_re + alpha_im * alpha_im + beta * beta;
    beta2 += beta * beta;
  }
  return 0.5 * quadratic + model.v * beta2 * beta2;
}

}  // namespace eqlab::rotsym
