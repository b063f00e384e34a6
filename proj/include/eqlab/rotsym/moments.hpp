#pragma once

#include <Eigen/Dense>

#include "eqlab/rotsym/model.hpp"

namespace eqlab::rotsym {

/// Symmetrized covariance of (Q, P, S, R) for one degree of freedom in |zeta>.
struct GaussianFiducialMoments {
  Eigen::Matrix4d cov;  // order Q, P, S, R
  double zeta = 0.0;

  double QQ() const { return cov(0, 0); }
  double QS() const { return cov(0, 2); }
  double PP() const { return cov(1, 1); }
  double PR() const { return cov(1, 3); }
};

/// The zeta conditions say (m M X + i Pi)|zeta> = 0 with X = (Q, S), Pi = (P, R) and
/// M = [[1, zeta], [zeta, 1]], so the wave function is exp(-m X^T M X / (2 hbar)):
/// <X X^T> = hbar/(2m) M^-1 and <Pi Pi^T> = hbar m M / 2. Mixed position-momentum blocks vanish.
inline GaussianFiducialMoments zeta_fiducial_moments(const RotSymModel& model) {
  model.validate();
  const double z = model.zeta;
  const double pos = model.hbar / (2.0 * model.m * (1.0 - z * z));
  const double mom = model.hbar * model.m / 2.0;
  GaussianFiducialMoments out;
  out.zeta = z;
  out.cov.setZero();
  out.cov(0, 0) = out.cov(2, 2) = pos;
  out.cov(0, 2) = out.cov(2, 0) = -z * pos;
  out.cov(1, 1) = out.cov(3, 3) = mom;
  out.cov(1, 3) = out.cov(3, 1) = z * mom;
  return out;
}

}  // namespace eqlab::rotsym
