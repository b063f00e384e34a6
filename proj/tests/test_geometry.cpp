#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "eqlab/geometry.hpp"

using namespace eqlab;
using namespace eqlab::geometry;

namespace {

std::vector<std::pair<double, double>> random_labels(std::size_t n, std::uint64_t seed, double lo, double hi) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<std::pair<double, double>> out;
  for (std::size_t i = 0; i < n; ++i) out.emplace_back(u(rng), u(rng));
  return out;
}

}  // namespace

// Canonical coherent states carry the flat metric diag(1/omega, omega) everywhere.
TEST(FubiniStudy, CanonicalMetricIsFlatAtRandomLabels) {
  for (double omega : {0.5, 1.0, 2.0}) {
    hilbert::QuantizationParams qp;
    qp.omega = omega;
    const auto fam = CanonicalFamily::build(qp, hilbert::BasisSpec::fock(128));
    for (const auto& [p, q] : random_labels(6, 17, -1.5, 1.5)) {
      const auto s = fubini_study_metric({p, q, CoherentVariant::Canonical}, fam);
      EXPECT_NEAR(s.g_pp, 1.0 / omega, 1e-6) << "omega " << omega << " at (" << p << ", " << q << ")";
      EXPECT_NEAR(s.g_pq, 0.0, 1e-6);
      EXPECT_NEAR(s.g_qq, omega, 1e-6);
      EXPECT_NEAR(s.scalar_curvature, 0.0, 1e-4);
    }
  }
}

TEST(FubiniStudy, MetricDoesNotDependOnHbar) {
  hilbert::QuantizationParams qp;
  qp.hbar = 0.25;
  qp.omega = 1.5;
  const auto fam = CanonicalFamily::build(qp, hilbert::BasisSpec::fock(128));
  const auto s = fubini_study_metric({0.4, -0.7, CoherentVariant::Canonical}, fam);
  EXPECT_NEAR(s.g_pp, 1.0 / 1.5, 1e-6);
  EXPECT_NEAR(s.g_qq, 1.5, 1e-6);
}

// Affine coherent states give the constant negative curvature metric q^2/beta dp^2 + beta/q^2 dq^2.
TEST(FubiniStudy, AffineMetricHasConstantNegativeCurvature) {
  for (double beta : {1.0, 2.0}) {
    hilbert::QuantizationParams qp;
    qp.beta_tilde = beta;
    const auto fam = AffineFamily::build(qp, hilbert::default_affine_basis(qp, 2000));
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> up(-1.0, 1.0);
    for (double q : {0.5, 1.0, 2.0}) {
      const double p = up(rng);
      const auto s = fubini_study_metric({p, q, CoherentVariant::Affine}, fam);
      const double gpp = q * q / beta, gqq = beta / (q * q);
      EXPECT_NEAR(s.g_pp / gpp, 1.0, 1e-4) << "beta " << beta << " q " << q;
      EXPECT_NEAR(s.g_pq, 0.0, 1e-4 * std::max(1.0, gpp));
      EXPECT_NEAR(s.g_qq / gqq, 1.0, 1e-4);
      EXPECT_NEAR(s.scalar_curvature, -2.0 / beta, 1e-3 * 2.0 / beta);
    }
  }
}

TEST(FubiniStudy, AffineLabelRequiresPositiveQ) {
  hilbert::QuantizationParams qp;
  const auto fam = AffineFamily::build(qp, hilbert::default_affine_basis(qp, 400));
  EXPECT_THROW(fubini_study_metric({0.0, -1.0, CoherentVariant::Affine}, fam), DomainError);
}

TEST(WeakCorrespondence, HarmonicSymbolIsClassicalPlusZeroPoint) {
  for (double hbar : {1.0, 0.3}) {
    hilbert::QuantizationParams qp;
    qp.hbar = hbar;
    qp.omega = 2.0;
    const auto fam = CanonicalFamily::build(qp, hilbert::BasisSpec::fock(128));
    const auto H = hilbert::harmonic_hamiltonian(fam.ops(), qp.omega);
    for (const auto& [p, q] : random_labels(8, 23, -2.0, 2.0)) {
      const double classical = 0.5 * (p * p + qp.omega * qp.omega * q * q);
      EXPECT_NEAR(weak_correspondence(H, {p, q}, fam), classical + 0.5 * hbar * qp.omega, 1e-9);
    }
  }
}

// <p,q| Q^4 |p,q> = q^4 + 6 q^2 s + 3 s^2 with s = hbar / (2 omega), the fiducial position variance.
TEST(WeakCorrespondence, QuarticSymbolMatchesGaussianMoments) {
  hilbert::QuantizationParams qp;
  qp.hbar = 0.5;
  qp.omega = 1.0;
  const auto fam = CanonicalFamily::build(qp, hilbert::BasisSpec::fock(128));
  const auto poly = PhasePolynomial::quartic(1.0);
  const auto H = poly.quantize(fam.ops().P, fam.ops().Q).hermitian_part();
  const double s = qp.hbar / (2.0 * qp.omega);
  for (const auto& [p, q] : random_labels(8, 29, -2.0, 2.0)) {
    const double expected = std::pow(q, 4) + 6.0 * q * q * s + 3.0 * s * s;
    EXPECT_NEAR(weak_correspondence(H, {p, q}, fam), expected, 1e-8);
    EXPECT_NEAR(shifted_operator_expectation(poly, fam, p, q), expected, 1e-8);
  }
}

TEST(WeakCorrespondence, DisplacedStateEqualsShiftedOperators) {
  hilbert::QuantizationParams qp;
  qp.omega = 1.3;
  const auto fam = CanonicalFamily::build(qp, hilbert::BasisSpec::fock(128));
  const PhasePolynomial poly({{0.5, "PP"}, {0.7, "QQ"}, {0.2, "PQQP"}, {-0.1, "QPQ"}});
  const auto H = poly.quantize(fam.ops().P, fam.ops().Q).hermitian_part();
  for (const auto& [p, q] : random_labels(10, 31, -2.0, 2.0)) {
    const double displaced = weak_correspondence(H, {p, q}, fam);
    EXPECT_NEAR(displaced, shifted_operator_expectation(poly, fam, p, q), 1e-8 * std::max(1.0, std::abs(displaced)));
  }
}

TEST(PhasePolynomial, RejectsForeignLetters) {
  EXPECT_THROW(PhasePolynomial({{1.0, "PX"}}), ConfigError);
  EXPECT_DOUBLE_EQ(PhasePolynomial::harmonic(2.0).classical(1.0, 0.5), 0.5 * (1.0 + 4.0 * 0.25));
}
