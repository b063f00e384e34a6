#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "eqlab/hilbert.hpp"

using namespace eqlab::hilbert;

namespace {

CDense random_hermitian(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  CDense a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a(i, j) = cplx(g(rng), g(rng));
  return 0.5 * (a + a.adjoint());
}

}  // namespace

TEST(Canonical, CommutatorIsIHbarBelowCutoff) {
  for (double hbar : {1.0, 0.3}) {
    QuantizationParams qp;
    qp.hbar = hbar;
    qp.omega = 1.7;
    const auto basis = BasisSpec::fock(40);
    const auto ops = build_canonical_ops(qp, basis);
    const auto proj = below_cutoff_projector(basis);
    const CDense defect =
        (proj * commutator(ops.Q, ops.P) * proj).dense() - kI * hbar * (proj * ops.identity() * proj).dense();
    EXPECT_LT(defect.cwiseAbs().maxCoeff(), 1e-12) << "hbar = " << hbar;
  }
}

TEST(Canonical, FiducialIsTheGaussianGroundState) {
  QuantizationParams qp;
  qp.hbar = 0.5;
  qp.omega = 2.0;
  const auto ops = build_canonical_ops(qp, BasisSpec::fock(64));
  const auto fid = solve_fiducial(ops);
  EXPECT_LT(fid.residual, 1e-10);
  EXPECT_NEAR(fid.amplitudes.norm(), 1.0, 1e-12);
  EXPECT_LT(ops.annihilator().apply(fid.amplitudes).norm(), 1e-10);
  EXPECT_NEAR(real_expectation(ops.Q, fid.amplitudes), 0.0, 1e-12);
  EXPECT_NEAR(real_expectation(ops.Q * ops.Q, fid.amplitudes), qp.hbar / (2.0 * qp.omega), 1e-12);
}

TEST(Canonical, HarmonicSpectrumIsEquallySpaced) {
  QuantizationParams qp;
  qp.hbar = 0.7;
  qp.omega = 1.3;
  const auto ops = build_canonical_ops(qp, BasisSpec::fock(60));
  const auto spec = eigen_spectrum(harmonic_hamiltonian(ops, qp.omega), 8, false);
  for (std::size_t k = 0; k < 8; ++k)
    EXPECT_NEAR(spec.eigenvalues[k], qp.hbar * qp.omega * (static_cast<double>(k) + 0.5), 1e-10);
  // The normal-ordered form only removes the zero-point energy.
  const auto no = eigen_spectrum(normal_ordered_harmonic(ops), 3, false);
  EXPECT_NEAR(no.eigenvalues[0], 0.0, 1e-10);
}

// Ground energy of -hbar^2/2 d^2/dx^2 + m^2 x^2/2 + F hbar^2/(2 x^2) on x > 0 is
// hbar m (1 + sqrt(F + 1/4)), and the levels are spaced by 2 hbar m.
TEST(Spiked, GroundEnergyAndSpacingFollowTheSpike) {
  for (double spike : {0.75, 2.0, 3.75}) {
    QuantizationParams qp;
    qp.hbar = 1.0;
    qp.mass = 1.5;
    const auto H = spiked_oscillator(qp, default_spiked_basis(qp, 3000), spike);
    const auto spec = eigen_spectrum(H, 4, false);
    const double e0 = qp.hbar * qp.mass * (1.0 + std::sqrt(spike + 0.25));
    EXPECT_NEAR(spec.eigenvalues[0] / e0, 1.0, 1e-6) << "spike " << spike;
    for (double g : spec.gaps()) EXPECT_NEAR(g / (2.0 * qp.hbar * qp.mass), 1.0, 1e-5) << "spike " << spike;
  }
}

TEST(Spiked, RejectsUniformGrid) {
  QuantizationParams qp;
  EXPECT_THROW(spiked_oscillator(qp, BasisSpec::half_line(100, 0.01, 5.0, GridScale::Uniform)), eqlab::ConfigError);
}

TEST(Affine, FiducialMatchesClosedForm) {
  QuantizationParams qp;
  qp.beta_tilde = 2.0;
  const auto basis = default_affine_basis(qp, 2000);
  const auto fid = solve_affine_fiducial(qp, basis);
  CVector ref = sample_on_grid(basis, [&](double x) { return cplx(affine_fiducial_closed_form(qp, x)); });
  ref.normalize();
  EXPECT_NEAR(std::abs(ref.dot(fid.amplitudes)), 1.0, 1e-8);
}

TEST(Affine, NonPositiveBetaHasNoFiducial) {
  QuantizationParams qp;
  qp.beta_tilde = -1.0;
  EXPECT_THROW(solve_affine_fiducial(qp, BasisSpec::half_line(100, 1e-3, 10.0)), eqlab::Error);
}

TEST(Expm, DenseMatchesEigendecomposition) {
  const CDense h = random_hermitian(12, 3);
  Eigen::SelfAdjointEigenSolver<CDense> es(h);
  const CDense ref = es.eigenvectors() *
                     (kI * es.eigenvalues().cast<cplx>()).array().exp().matrix().asDiagonal() *
                     es.eigenvectors().adjoint();
  EXPECT_LT((expm(kI * h) - ref).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Expm, ActionMatchesDenseExponential) {
  const CDense h = random_hermitian(30, 11);
  const CSparse a = (kI * 3.0 * h).sparseView();
  CVector v = CVector::Random(30);
  v.normalize();
  const CVector ref = expm(CDense(a)) * v;
  EXPECT_LT((expm_multiply(a, v) - ref).norm(), 1e-11);
}

TEST(Eigensolver, AgreesWithDenseSolver) {
  const std::size_t n = 300;
  std::vector<RTriplet> t;
  for (std::size_t i = 0; i < n; ++i) {
    t.emplace_back(i, i, 2.0 + std::cos(0.1 * static_cast<double>(i)));
    if (i + 1 < n) {
      t.emplace_back(i, i + 1, -1.0);
      t.emplace_back(i + 1, i, -1.0);
    }
  }
  RSparse m(n, n);
  m.setFromTriplets(t.begin(), t.end());
  const auto pairs = lowest_eigenpairs<double>(m, 6);
  Eigen::SelfAdjointEigenSolver<RDense> es{RDense(m)};
  for (int k = 0; k < 6; ++k) EXPECT_NEAR(pairs.values(k), es.eigenvalues()(k), 1e-10);
  // Iteration stops on a 1e-13 relative change of the eigenvalues. Eigenvalue errors go like the
  // squared vector residual, so the residual itself sits near sqrt(1e-13).
  EXPECT_LT(pairs.max_residual, 1e-6);
  EXPECT_EQ(pairs.method.rfind("dense", 0), std::string::npos);
}

TEST(Stencil, CentralDerivativeConvergesAtItsOrder) {
  for (int order : {2, 4, 8}) {
    std::vector<double> errs;
    for (std::size_t n : {200u, 400u}) {
      const double h = 1.0 / static_cast<double>(n);
      const RSparse d = central_derivative_matrix(n, h, order);
      RVector f(n);
      for (std::size_t j = 0; j < n; ++j) f(j) = std::sin(3.0 * h * static_cast<double>(j));
      const RVector df = d * f;
      double err = 0.0;
      for (std::size_t j = static_cast<std::size_t>(order); j + order < n; ++j)
        err = std::max(err, std::abs(df(j) - 3.0 * std::cos(3.0 * h * static_cast<double>(j))));
      errs.push_back(err);
    }
    if (errs[1] > 1e-12) EXPECT_NEAR(std::log2(errs[0] / errs[1]), order, 0.3) << "order " << order;
  }
  EXPECT_THROW(central_first_derivative_weights(3), eqlab::ConfigError);
}

TEST(OperatorMatrix, ContractsAreEnforced) {
  const auto a = OperatorMatrix::identity(BasisSpec::fock(4));
  const auto b = OperatorMatrix::identity(BasisSpec::fock(5));
  EXPECT_THROW(a + b, eqlab::ContractViolation);
  EXPECT_THROW(a.apply(CVector::Zero(5)), eqlab::ContractViolation);
  const auto skew = kI * a;
  EXPECT_THROW(real_expectation(skew, CVector::Ones(4)), eqlab::ContractViolation);
}
