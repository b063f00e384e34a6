#pragma once

#include <cmath>
#include <utility>

#include "eqlab/core/error.hpp"
#include "eqlab/hilbert/params.hpp"
#include "eqlab/hilbert/types.hpp"

namespace eqlab::hilbert {

inline constexpr double kHermitianTolerance = 1e-12;

/// Relative Frobenius distance between m and its adjoint.
inline double hermiticity_defect(const CSparse& m) {
  const double scale = m.norm();
  if (scale == 0.0) return 0.0;
  const CSparse diff = m - CSparse(m.adjoint());
  return diff.norm() / scale;
}

/// An operator on a finite computational basis. Entries are stored sparse (grid operators are
/// banded and Fock ladder operators tridiagonal); dense() gives the full matrix.
class OperatorMatrix {
 public:
  OperatorMatrix() = default;

  OperatorMatrix(BasisSpec basis, CSparse entries) : basis_(std::move(basis)), entries_(std::move(entries)) {
    if (entries_.rows() != static_cast<Eigen::Index>(basis_.dimension) || entries_.cols() != entries_.rows())
      throw ContractViolation("OperatorMatrix shape does not match basis dimension");
    entries_.makeCompressed();
    hermitian_ = hermiticity_defect(entries_) <= kHermitianTolerance;
  }

  OperatorMatrix(BasisSpec basis, const RSparse& entries)
      : OperatorMatrix(std::move(basis), CSparse(entries.cast<cplx>())) {}

  static OperatorMatrix identity(const BasisSpec& basis) {
    CSparse id(basis.dimension, basis.dimension);
    id.setIdentity();
    return {basis, std::move(id)};
  }

  static OperatorMatrix diagonal(const BasisSpec& basis, const RVector& d) {
    CSparse m(d.size(), d.size());
    m.reserve(Eigen::VectorXi::Constant(d.size(), 1));
    for (Eigen::Index i = 0; i < d.size(); ++i) m.insert(i, i) = d(i);
    return {basis, std::move(m)};
  }

  const BasisSpec& basis() const { return basis_; }
  const CSparse& entries() const { return entries_; }
  std::size_t dimension() const { return basis_.dimension; }
  bool hermitian_flag() const { return hermitian_; }
  CDense dense() const { return CDense(entries_); }

  void require_hermitian(const char* what) const {
    if (!hermitian_) throw ContractViolation(std::string(what) + ": operator is not Hermitian");
  }

  CVector apply(const CVector& v) const {
    check_size(v);
    return entries_ * v;
  }

  cplx expectation(const CVector& v) const {
    check_size(v);
    return v.dot(entries_ * v);
  }

  OperatorMatrix adjoint() const { return {basis_, CSparse(entries_.adjoint())}; }

  friend OperatorMatrix operator+(const OperatorMatrix& a, const OperatorMatrix& b) {
    same_basis(a, b);
    return {a.basis_, CSparse(a.entries_ + b.entries_)};
  }
  friend OperatorMatrix operator-(const OperatorMatrix& a, const OperatorMatrix& b) {
    same_basis(a, b);
    return {a.basis_, CSparse(a.entries_ - b.entries_)};
  }
  friend OperatorMatrix operator*(const OperatorMatrix& a, const OperatorMatrix& b) {
    same_basis(a, b);
    return {a.basis_, CSparse((a.entries_ * b.entries_).pruned())};
  }
  friend OperatorMatrix operator*(cplx s, const OperatorMatrix& a) { return {a.basis_, CSparse(s * a.entries_)}; }
  friend OperatorMatrix operator*(double s, const OperatorMatrix& a) { return cplx(s) * a; }

  /// a + s * I
  OperatorMatrix shifted(cplx s) const { return *this + s * identity(basis_); }

  /// [a, b] = ab - ba
  friend OperatorMatrix commutator(const OperatorMatrix& a, const OperatorMatrix& b) { return a * b - b * a; }

  /// Hermitian part (a + a^dagger)/2, used to symmetrize products of truncated operators.
  OperatorMatrix hermitian_part() const { return {basis_, CSparse(0.5 * (entries_ + CSparse(entries_.adjoint())))}; }

 private:
  static void same_basis(const OperatorMatrix& a, const OperatorMatrix& b) {
    if (!(a.basis_ == b.basis_)) throw ContractViolation("operators live on different bases");
  }
  void check_size(const CVector& v) const {
    if (v.size() != static_cast<Eigen::Index>(basis_.dimension))
      throw ContractViolation("vector size does not match operator dimension");
  }

  BasisSpec basis_{};
  CSparse entries_{};
  bool hermitian_ = false;
};

/// Real part of <v|A|v> for Hermitian A; rejects non-Hermitian operators.
inline double real_expectation(const OperatorMatrix& a, const CVector& v) {
  a.require_hermitian("real_expectation");
  return a.expectation(v).real();
}

}  // namespace eqlab::hilbert
