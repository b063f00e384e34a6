#pragma once

#include <cmath>
#include <concepts>
#include <string>

#include "eqlab/hilbert/affine.hpp"
#include "eqlab/hilbert/canonical.hpp"
#include "eqlab/hilbert/expm.hpp"
#include "eqlab/hilbert/fiducial.hpp"

namespace eqlab::geometry {

using hilbert::cplx;
using hilbert::CVector;
using hilbert::kI;

enum class CoherentVariant { Canonical, Affine };

inline const char* to_string(CoherentVariant v) { return v == CoherentVariant::Canonical ? "Canonical" : "Affine"; }

/// Classical point (p, q) that labels a coherent state.
struct CoherentLabel {
  double p = 0.0;
  double q = 0.0;
  CoherentVariant variant = CoherentVariant::Canonical;

  void validate() const {
    if (!std::isfinite(p) || !std::isfinite(q)) throw DomainError("CoherentLabel: p and q must be finite");
    if (variant == CoherentVariant::Affine && !(q > 0.0)) throw DomainError("affine CoherentLabel requires q > 0");
  }
};

/// A family of normalized states labelled by (p, q).
template <class F>
concept CoherentFamily = requires(const F& f, double p, double q) {
  { f.state(p, q) } -> std::convertible_to<CVector>;
  { f.hbar() } -> std::convertible_to<double>;
  { f.variant() } -> std::same_as<CoherentVariant>;
  { f.fiducial() } -> std::convertible_to<const hilbert::FiducialVector&>;
};

/// |p,q> = exp(-i q P / hbar) exp(i p Q / hbar) |0> on a Fock basis.
///
/// Both factors are exponentials of Hermitian generators, so they are evaluated from one
/// eigendecomposition each: exp(i t A) = V diag(exp(i t a_k)) V^dagger. That is the same function
/// of the same truncated matrix as a Pade expm but costs O(D^2) per state.
class CanonicalFamily {
 public:
  CanonicalFamily(hilbert::CanonicalOps ops, hilbert::FiducialVector fid) : ops_(std::move(ops)), fid_(std::move(fid)) {
    if (!(fid_.basis == ops_.basis)) throw ContractViolation("fiducial and operators live on different bases");
    Eigen::SelfAdjointEigenSolver<hilbert::CDense> eq(ops_.Q.dense());
    Eigen::SelfAdjointEigenSolver<hilbert::CDense> ep(ops_.P.dense());
    q_values_ = eq.eigenvalues();
    q_vectors_ = eq.eigenvectors();
    p_values_ = ep.eigenvalues();
    p_vectors_ = ep.eigenvectors();
  }

  static CanonicalFamily build(const hilbert::QuantizationParams& params, const hilbert::BasisSpec& basis,
                               const hilbert::FiducialOptions& opts = {}) {
    auto ops = hilbert::build_canonical_ops(params, basis);
    auto fid = hilbert::solve_fiducial(ops, opts);
    return {std::move(ops), std::move(fid)};
  }

  CVector state(double p, double q) const {
    const double hb = hbar();
    CVector c = q_vectors_.adjoint() * fid_.amplitudes;
    for (Eigen::Index k = 0; k < c.size(); ++k) c(k) *= std::exp(kI * (p * q_values_(k) / hb));
    CVector v = q_vectors_ * c;
    c = p_vectors_.adjoint() * v;
    for (Eigen::Index k = 0; k < c.size(); ++k) c(k) *= std::exp(-kI * (q * p_values_(k) / hb));
    return p_vectors_ * c;
  }

  double hbar() const { return ops_.params.hbar; }
  CoherentVariant variant() const { return CoherentVariant::Canonical; }
  const hilbert::FiducialVector& fiducial() const { return fid_; }
  const hilbert::CanonicalOps& ops() const { return ops_; }
  const hilbert::OperatorMatrix& position() const { return ops_.Q; }
  const hilbert::OperatorMatrix& momentum() const { return ops_.P; }

 private:
  hilbert::CanonicalOps ops_;
  hilbert::FiducialVector fid_;
  hilbert::RVector q_values_, p_values_;
  hilbert::CDense q_vectors_, p_vectors_;
};

/// |p,q;a> = exp(i p Q / hbar) exp(-i ln(q) D / hbar) |beta~> on a half-line grid.
/// The dilation is the exponential action of the sparse generator; Q is diagonal, so the
/// second factor is an exact phase.
class AffineFamily {
 public:
  AffineFamily(hilbert::AffineOps ops, hilbert::FiducialVector fid) : ops_(std::move(ops)), fid_(std::move(fid)) {
    if (!(fid_.basis == ops_.basis)) throw ContractViolation("fiducial and operators live on different bases");
    x_ = ops_.basis.nodes();
  }

  static AffineFamily build(const hilbert::QuantizationParams& params, const hilbert::BasisSpec& basis,
                            const hilbert::FiducialOptions& opts = {}) {
    auto ops = hilbert::build_affine_ops(params, basis);
    auto fid = hilbert::solve_fiducial(ops, opts);
    return {std::move(ops), std::move(fid)};
  }

  /// exp(-i ln(q) D / hbar) applied to v.
  CVector dilate(const CVector& v, double q) const {
    if (!(q > 0.0)) throw DomainError("affine dilation requires q > 0");
    const double t = std::log(q);
    if (t == 0.0) return v;
    const hilbert::CSparse gen = (-kI * (t / hbar())) * ops_.D.entries();
    return hilbert::expm_multiply(gen, v);
  }

  CVector state(double p, double q) const {
    CVector v = dilate(fid_.amplitudes, q);
    for (Eigen::Index j = 0; j < v.size(); ++j) v(j) *= std::exp(kI * (p * x_[static_cast<std::size_t>(j)] / hbar()));
    return v;
  }

  double hbar() const { return ops_.params.hbar; }
  CoherentVariant variant() const { return CoherentVariant::Affine; }
  const hilbert::FiducialVector& fiducial() const { return fid_; }
  const hilbert::AffineOps& ops() const { return ops_; }
  const hilbert::OperatorMatrix& position() const { return ops_.Q; }

 private:
  hilbert::AffineOps ops_;
  hilbert::FiducialVector fid_;
  std::vector<double> x_;
};

/// Coherent state for a label, checking the label against the family.
template <CoherentFamily F>
CVector coherent_state(const CoherentLabel& label, const F& family) {
  label.validate();
  if (label.variant != family.variant())
    throw ContractViolation(std::string("label variant ") + to_string(label.variant) + " does not match family " +
                            to_string(family.variant()));
  return family.state(label.p, label.q);
}

/// Grid-transform oracle for the affine dilation on a logarithmic grid: phi(u) -> phi(u - ln q)
/// by Lagrange interpolation of the given order across neighbouring nodes. Points that fall
/// outside the grid get zero.
inline CVector dilate_by_interpolation(const hilbert::BasisSpec& basis, const CVector& amplitudes, double q,
                                       int order = 12) {
  if (basis.grid_scale != hilbert::GridScale::Logarithmic) throw ConfigError("interpolation oracle needs a log grid");
  if (!(q > 0.0)) throw DomainError("affine dilation requires q > 0");
  const double h = basis.step();
  const double shift = std::log(q) / h;  // in nodes
  const long n = static_cast<long>(basis.dimension);
  CVector out = CVector::Zero(amplitudes.size());
  for (long j = 0; j < n; ++j) {
    const double s = static_cast<double>(j) - shift;  // fractional source index
    if (s < 0.0 || s > static_cast<double>(n - 1)) continue;
    long first = static_cast<long>(std::floor(s)) - order / 2 + 1;
    first = std::clamp(first, 0L, n - order);
    cplx acc = 0.0;
    for (int a = 0; a < order; ++a) {
      double w = 1.0;
      const double xa = static_cast<double>(first + a);
      for (int b = 0; b < order; ++b)
        if (b != a) w *= (s - static_cast<double>(first + b)) / (xa - static_cast<double>(first + b));
      acc += w * amplitudes(first + a);
    }
    out(j) = acc;
  }
  return out;
}

}  // namespace eqlab::geometry
