#pragma once

#include <cmath>
#include <vector>

#include "eqlab/rotsym/model.hpp"

namespace eqlab::rotsym {

struct Trajectory {
  std::vector<double> t;
  std::vector<PhasePoint> points;
  std::vector<double> energy;
};

/// Leapfrog (kick-drift-kick) integration of the classical model. Every record_every-th step
/// is stored, plus the initial point.
inline Trajectory classical_flow(const RotSymModel& model, const PhasePoint& start, double dt, std::size_t n_steps,
                                 std::size_t record_every = 1) {
  model.validate();
  start.check(model.n_dof);
  if (!(dt > 0.0)) throw ConfigError("classical_flow requires dt > 0");
  if (record_every == 0) record_every = 1;
  const std::size_t n = model.n_dof;
  const double m0sq = model.m0_sq();
  const double lam = model.lambda0();
  std::vector<double> p = start.p, q = start.q, force(n);
  auto compute_force = [&] {
    double q2 = 0.0;
    for (double v : q) q2 += v * v;
    for (std::size_t k = 0; k < n; ++k) force[k] = -(m0sq + 4.0 * lam * q2) * q[k];
  };
  Trajectory out;
  auto record = [&](double t) {
    PhasePoint x{p, q};
    out.t.push_back(t);
    out.energy.push_back(classical_hamiltonian(model, x));
    out.points.push_back(std::move(x));
  };
  record(0.0);
  compute_force();
  for (std::size_t step = 1; step <= n_steps; ++step) {
    for (std::size_t k = 0; k < n; ++k) p[k] += 0.5 * dt * force[k];
    for (std::size_t k = 0; k < n; ++k) q[k] += dt * p[k];
    compute_force();
    for (std::size_t k = 0; k < n; ++k) p[k] += 0.5 * dt * force[k];
    if (step % record_every == 0 || step == n_steps) record(static_cast<double>(step) * dt);
  }
  return out;
}

/// Applies the site permutation sigma (new index n takes old index sigma[n]) to a point.
inline PhasePoint permute(const PhasePoint& x, const std::vector<std::size_t>& sigma) {
  PhasePoint out{std::vector<double>(sigma.size()), std::vector<double>(sigma.size())};
  for (std::size_t n = 0; n < sigma.size(); ++n) {
    out.p[n] = x.p.at(sigma[n]);
    out.q[n] = x.q.at(sigma[n]);
  }
  return out;
}

}  // namespace eqlab::rotsym
