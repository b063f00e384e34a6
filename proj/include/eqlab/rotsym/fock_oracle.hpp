#pragma once

#include <cmath>
#include <vector>

#include <unsupported/Eigen/KroneckerProduct>

#include "eqlab/hilbert/canonical.hpp"
#include "eqlab/hilbert/expm.hpp"
#include "eqlab/hilbert/fiducial.hpp"
#include "eqlab/rotsym/model.hpp"

namespace eqlab::rotsym {

using hilbert::cplx;
using hilbert::CDense;
using hilbert::CSparse;
using hilbert::CVector;
using hilbert::kI;

inline constexpr std::size_t kFockOracleMaxDof = 2;
inline constexpr std::size_t kFockOracleMaxCutoff = 40;

namespace detail {

/// Applies a single-mode matrix to mode k of a tensor-product vector (mode 0 varies fastest).
inline CVector apply_mode(const CDense& op, std::size_t k, std::size_t cutoff, const CVector& v) {
  std::size_t stride = 1;
  for (std::size_t i = 0; i < k; ++i) stride *= cutoff;
  const std::size_t block = stride * cutoff;
  const auto total = static_cast<std::size_t>(v.size());
  CVector out = CVector::Zero(v.size());
  for (std::size_t base = 0; base < total; base += block)
    for (std::size_t inner = 0; inner < stride; ++inner)
      for (std::size_t r = 0; r < cutoff; ++r) {
        cplx acc = 0.0;
        for (std::size_t c = 0; c < cutoff; ++c) {
          const cplx e = op(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
          if (e != cplx(0.0)) acc += e * v(static_cast<Eigen::Index>(base + inner + c * stride));
        }
        out(static_cast<Eigen::Index>(base + inner + r * stride)) = acc;
      }
  return out;
}

}  // namespace detail

/// Brute-force evaluation of the rotationally symmetric construction on truncated Fock spaces.
///
/// Every degree of freedom n carries two modes: (Q_n, P_n) on tensor axis 2n and (S_n, R_n) on
/// axis 2n+1, each with ladder scale sqrt(hbar/(2m)). The fiducial of one degree of freedom is the
/// common null vector of A = m(Q + zeta S) + iP and B = m(S + zeta Q) + iR on its two-mode space;
/// the full fiducial is the product over degrees of freedom. The state is displaced with dense
/// matrix exponentials and the normal-ordered Hamiltonian is evaluated as
///   1/2 sum_n (||A_n psi||^2 + ||B_n psi||^2) + v sum_{n,n'} ||B_n' B_n psi||^2.
class FockOracle {
 public:
  FockOracle(const RotSymModel& model, std::size_t cutoff) : model_(model), cutoff_(cutoff) {
    model_.validate();
    if (model_.n_dof > kFockOracleMaxDof || cutoff_ > kFockOracleMaxCutoff)
      throw ConfigError("fock_oracle resource bound: needs N <= 2 and cutoff <= 40");
    if (cutoff_ < 8) throw ConfigError("fock_oracle cutoff must be >= 8");
    const hilbert::RSparse a = hilbert::annihilation_matrix(cutoff_);
    const hilbert::RSparse ad = a.transpose();
    const double xs = std::sqrt(model_.hbar / (2.0 * model_.m));
    const double ps = std::sqrt(model_.hbar * model_.m / 2.0);
    x_ = CDense(hilbert::RDense(xs * (a + ad)).cast<cplx>());
    p_ = kI * ps * CDense(hilbert::RDense(ad - a).cast<cplx>());

    // Two-mode fiducial for one degree of freedom.
    CSparse id(cutoff_, cutoff_);
    id.setIdentity();
    const CSparse xs_sp = x_.sparseView();
    const CSparse ps_sp = p_.sparseView();
    const CSparse Q = Eigen::kroneckerProduct(id, xs_sp);
    const CSparse P = Eigen::kroneckerProduct(id, ps_sp);
    const CSparse S = Eigen::kroneckerProduct(xs_sp, id);
    const CSparse R = Eigen::kroneckerProduct(ps_sp, id);
    const double m = model_.m, z = model_.zeta;
    const CSparse A = cplx(m) * (Q + cplx(z) * S) + kI * P;
    const CSparse B = cplx(m) * (S + cplx(z) * Q) + kI * R;
    hilbert::FiducialOptions loose;
    loose.tolerance = std::numeric_limits<double>::infinity();
    const auto two_mode = hilbert::BasisSpec::fock(cutoff_ * cutoff_);
    const auto fid = hilbert::least_singular_vector({A, B}, two_mode, hilbert::FiducialCondition::RotsymZeta,
                                                    std::sqrt(2.0 * model_.hbar * m), loose);
    fiducial_residual_ = fid.residual;
    fiducial_ = fid.amplitudes;
    for (std::size_t n = 1; n < model_.n_dof; ++n) {
      CVector next(fiducial_.size() * fid.amplitudes.size());
      for (Eigen::Index hi = 0; hi < fid.amplitudes.size(); ++hi)
        next.segment(hi * fiducial_.size(), fiducial_.size()) = fid.amplitudes(hi) * fiducial_;
      fiducial_ = std::move(next);
    }
  }

  std::size_t dimension() const { return static_cast<std::size_t>(fiducial_.size()); }
  double fiducial_residual() const { return fiducial_residual_; }
  const CVector& fiducial() const { return fiducial_; }

  /// exp(-i sum q_n P_n / hbar) exp(i sum p_n Q_n / hbar) |zeta>
  CVector displaced(const PhasePoint& x) const {
    x.check(model_.n_dof);
    CVector v = fiducial_;
    for (std::size_t n = 0; n < model_.n_dof; ++n) {
      const CDense ux = hilbert::expm(kI * (x.p[n] / model_.hbar) * x_);
      const CDense up = hilbert::expm(-kI * (x.q[n] / model_.hbar) * p_);
      v = detail::apply_mode(ux, 2 * n, cutoff_, v);
      v = detail::apply_mode(up, 2 * n, cutoff_, v);
    }
    return v;
  }

  CVector apply_A(std::size_t n, const CVector& v) const {
    return cplx(model_.m) * (mode(x_, 2 * n, v) + cplx(model_.zeta) * mode(x_, 2 * n + 1, v)) + kI * mode(p_, 2 * n, v);
  }
  CVector apply_B(std::size_t n, const CVector& v) const {
    return cplx(model_.m) * (mode(x_, 2 * n + 1, v) + cplx(model_.zeta) * mode(x_, 2 * n, v)) +
           kI * mode(p_, 2 * n + 1, v);
  }

  double expectation(const PhasePoint& x) const {
    const CVector psi = displaced(x);
    double quadratic = 0.0, quartic = 0.0;
    std::vector<CVector> b(model_.n_dof);
    for (std::size_t n = 0; n < model_.n_dof; ++n) {
      quadratic += apply_A(n, psi).squaredNorm();
      b[n] = apply_B(n, psi);
      quadratic += b[n].squaredNorm();
    }
    for (std::size_t n = 0; n < model_.n_dof; ++n)
      for (std::size_t k = 0; k < model_.n_dof; ++k) quartic += apply_B(k, b[n]).squaredNorm();
    return 0.5 * quadratic + model_.v * quartic;
  }

 private:
  CVector mode(const CDense& op, std::size_t k, const CVector& v) const { return detail::apply_mode(op, k, cutoff_, v); }

  RotSymModel model_;
  std::size_t cutoff_;
  CDense x_, p_;
  CVector fiducial_;
  double fiducial_residual_ = 0.0;
};

inline double fock_oracle(const RotSymModel& model, const PhasePoint& x, std::size_t cutoff) {
  return FockOracle(model, cutoff).expectation(x);
}

}  // namespace eqlab::rotsym
