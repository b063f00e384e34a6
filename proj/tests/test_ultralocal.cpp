#include <cmath>

#include <boost/math/special_functions/hypergeometric_pFq.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <gtest/gtest.h>

#include "eqlab/ultralocal.hpp"

using namespace eqlab;
using namespace eqlab::ultralocal;

namespace {

LatticeSpec lattice(double a, double L, double lambda0, LatticeScheme scheme, double hbar = 1.0, double m0 = 1.0) {
  LatticeSpec s;
  s.s = 1;
  s.a = a;
  s.K = static_cast<std::size_t>(std::llround(L / a));
  s.m0 = m0;
  s.hbar = hbar;
  s.lambda0 = lambda0;
  s.scheme = scheme;
  return s;
}

// Oracle: J(theta) = 2 y 2F2(1, 1; 2, 3/2; -y) with y = w^2 / (4 kappa), w = theta / hbar,
// for z(lambda) = kappa lambda^2. The series alternates and cancels badly for large y, so it is
// summed in 100-digit arithmetic.
double poisson_oracle(double theta, double hbar, double kappa) {
  using big = boost::multiprecision::cpp_bin_float_100;
  const big w = big(theta) / big(hbar);
  const big y = w * w / (4 * big(kappa));
  return static_cast<double>(2 * y * boost::math::hypergeometric_pFq({big(1), big(1)}, {big(2), big(1.5)}, big(-y)));
}

}  // namespace

TEST(Lattice, ValidationRejectsBadSpecs) {
  auto s = lattice(0.1, 1.0, 0.0, LatticeScheme::Bare);
  EXPECT_NO_THROW(s.validate());
  s.b = 20.0;  // b a^s >= 1
  EXPECT_THROW(s.validate(), DomainError);
  s = lattice(0.1, 1.0, 0.0, LatticeScheme::Bare);
  s.s = 2;
  s.K = 10;
  EXPECT_THROW(s.side(), ConfigError);
}

// The free canonical site is Gaussian: log C(theta f) = -theta^2 sum f_k^2 a^s / (4 m0 hbar).
TEST(CqSite, FreeModelIsExactlyGaussian) {
  const auto spec = lattice(0.2, 5.0, 0.0, LatticeScheme::Bare, 0.5, 2.0);
  const auto site = cq_site_ground(spec);
  EXPECT_NEAR(site.profile.moments[0], spec.cell_volume() / (2.0 * spec.m0 * spec.hbar), 1e-9);
  const auto f = standard_test_functions(spec.volume())[0].sample(spec);
  const std::vector<double> thetas{0.5, 1.0, 2.0};
  const auto r = characteristic_function(spec, site.profile, f, thetas);
  double f2 = 0.0;
  for (double v : f.samples) f2 += v * v * spec.cell_volume();
  for (std::size_t i = 0; i < thetas.size(); ++i) {
    const double expected = -thetas[i] * thetas[i] * f2 / (4.0 * spec.m0 * spec.hbar);
    EXPECT_NEAR(std::log(std::abs(r.values[i])), expected, 1e-8 * std::abs(expected));
    EXPECT_NEAR(std::arg(r.values[i]), 0.0, 1e-12);
  }
}

TEST(CqSite, GroundEnergyConvergesAndSpectrumIsHarmonicWhenFree) {
  const auto spec = lattice(0.2, 1.0, 0.0, LatticeScheme::Bare);
  const auto site = cq_site_ground(spec);
  const auto& ev = site.spectrum.eigenvalues;
  for (std::size_t k = 1; k < ev.size(); ++k) EXPECT_NEAR(ev[k] - ev[k - 1], spec.hbar * spec.m0, 1e-6);
}

TEST(CqSite, QuarticSiteStaysInsideTheUnitDisk) {
  const auto spec = lattice(0.2, 1.0, 1.0, LatticeScheme::Renormalized);
  const auto prof = cq_site_ground(spec).profile;
  const auto triple = [&] {
    const auto fs = standard_test_functions(spec.volume());
    return std::array<TestFunction, 3>{fs[0].sample(spec), fs[1].sample(spec), fs[2].sample(spec)};
  }();
  const auto ax = check_axioms(spec, prof, triple);
  EXPECT_TRUE(ax.ok()) << "max |C| " << ax.max_modulus << ", conjugate " << ax.conjugate_defect << ", Bochner "
                       << ax.bochner_min_eigenvalue;
  EXPECT_EQ(ax.c_zero_defect, 0.0);
}

TEST(PoissonExponent, MatchesHypergeometricOracle) {
  for (double kappa : {0.5, 1.0, 3.0})
    for (double hbar : {1.0, 0.5})
      for (double theta : {0.1, 0.5, 1.0, 2.0, 4.0, 8.0}) {
        const double got = poisson_exponent(theta, hbar, [kappa](double l) { return kappa * l * l; });
        const double want = poisson_oracle(theta, hbar, kappa);
        EXPECT_NEAR(got, want, 1e-9 * std::max(1.0, want)) << "kappa " << kappa << " hbar " << hbar << " theta " << theta;
      }
}

TEST(PoissonExponent, EvenAndZeroAtOrigin) {
  auto z = [](double l) { return l * l; };
  EXPECT_EQ(poisson_exponent(0.0, 1.0, z), 0.0);
  EXPECT_DOUBLE_EQ(poisson_exponent(-1.3, 1.0, z), poisson_exponent(1.3, 1.0, z));
}

// The affine site carries the 1/phi^2 spike; the ground state must integrate to one.
TEST(EqSite, GroundStateIsNormalized) {
  auto spec = lattice(0.01, 1.0, 0.0, LatticeScheme::Renormalized);
  EqSiteDetails details;
  const auto site = eq_site_ground(spec, {}, &details);
  EXPECT_NEAR(details.normalization_check, 1.0, 1e-6);
  EXPECT_NEAR(site.profile.normalization, 1.0, 1e-6);
  EXPECT_NEAR(details.alpha, 0.5 - (1.0 - spec.epsilon()), 1e-15);
}

TEST(EqSite, FreeProfileSatisfiesAxioms) {
  const auto spec = lattice(0.01, 1.0, 0.0, LatticeScheme::Renormalized);
  const auto prof = free_model_profile(spec);
  const auto fs = standard_test_functions(spec.volume());
  const auto ax = check_axioms(spec, prof, {fs[0].sample(spec), fs[1].sample(spec), fs[2].sample(spec)});
  EXPECT_TRUE(ax.ok());
  // A site factor is a characteristic function of a symmetric law: real and within [-1, 1].
  for (double t : {0.1, 1.0, 10.0}) EXPECT_LE(std::abs(prof.site_factor(t)), 1.0);
}

// Free affine sites converge to the generalized Poisson law with exponent J.
TEST(Continuum, FreeAffineLimitIsGeneralizedPoisson) {
  std::vector<LatticeSpec> family;
  for (double a : {0.01, 0.005, 0.0025}) family.push_back(lattice(a, 1.0, 0.0, LatticeScheme::Renormalized));
  const auto f = standard_test_functions(1.0)[1];
  ContinuumOptions opts;
  opts.thetas = {0.5, 1.0, 2.0, 4.0};
  const auto r = continuum_limit(family, free_model_profile, f, opts);
  EXPECT_EQ(r.limit_class, LimitClass::GeneralizedPoisson) << r.diagnostics;
  const double kappa = family.front().b * family.front().m0 / family.front().hbar;
  for (std::size_t i = 0; i < opts.thetas.size(); ++i) {
    const double closed = poisson_log_functional(family.front().b, 1.0, [kappa](double l) { return kappa * l * l; }, f,
                                                 1, 1.0, opts.thetas[i]);
    EXPECT_NEAR(std::log(std::abs(r.values[i])), closed, 1e-3 * std::max(1.0, std::abs(closed)));
  }
}

TEST(Continuum, NevilleRecoversPolynomialIntercept) {
  const std::vector<double> x{0.04, 0.02, 0.01};
  std::vector<double> y;
  for (double v : x) y.push_back(1.5 - 2.0 * v + 7.0 * v * v);
  EXPECT_NEAR(neville_at_zero(x, y), 1.5, 1e-13);
  EXPECT_THROW(continuum_limit({}, free_model_profile, standard_test_functions(1.0)[0]), ConfigError);
}

TEST(AffineCurrent, SpikeCoefficientConvergesAndBracketHolds) {
  AffineCurrentOptions o;
  o.grids = {500, 1000, 2000};
  const auto rep = affine_current_check(o);
  ASSERT_EQ(rep.F_prime.size(), 3u);
  EXPECT_TRUE(rep.improving());
  EXPECT_NEAR(rep.F_prime.back(), 0.75, 1e-2);
  for (double e : rep.commutator_error) EXPECT_LT(e, 1e-6);
  EXPECT_LT(rep.classical_bracket_error, 1e-8);
}
