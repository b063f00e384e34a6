#include <cmath>
#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include "eqlab/rotsym.hpp"

using namespace eqlab;
using namespace eqlab::rotsym;

namespace {

PhasePoint random_point(std::size_t n, std::mt19937_64& rng, double range) {
  std::uniform_real_distribution<double> u(-range, range);
  PhasePoint x{std::vector<double>(n), std::vector<double>(n)};
  for (std::size_t k = 0; k < n; ++k) {
    x.p[k] = u(rng);
    x.q[k] = u(rng);
  }
  return x;
}

RotSymModel random_model(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  RotSymModel m;
  m.n_dof = n;
  m.m = 0.5 + 1.5 * u(rng);
  m.zeta = 0.9 * u(rng);
  m.v = 2.0 * u(rng);
  m.hbar = 0.2 + u(rng);
  return m;
}

}  // namespace

TEST(RotSym, WeakCorrespondenceReproducesClassicalHamiltonian) {
  std::mt19937_64 rng(101);
  for (std::size_t trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + trial % 5;
    const auto model = random_model(n, rng);
    const auto x = random_point(n, rng, 2.0);
    const double h = classical_hamiltonian(model, x);
    EXPECT_NEAR(eq_weak_correspondence(model, x), h, 1e-10 * std::max(1.0, h)) << "trial " << trial;
  }
}

TEST(RotSym, DerivedCouplings) {
  RotSymModel m;
  m.m = 2.0;
  m.zeta = 0.5;
  m.v = 3.0;
  EXPECT_DOUBLE_EQ(m.m0_sq(), 4.0 * 1.25);
  EXPECT_DOUBLE_EQ(m.lambda0(), 3.0 * 0.0625 * 16.0);
  m.zeta = 1.0;
  EXPECT_THROW(m.validate(), DomainError);
}

// The truncated Fock-space construction converges to the closed form as the cutoff grows.
TEST(RotSym, FockOracleConvergesToClosedForm) {
  std::mt19937_64 rng(7);
  for (std::size_t n : {1u, 2u}) {
    RotSymModel model;
    model.n_dof = n;
    model.m = 1.1;
    model.zeta = 0.4;
    model.v = 0.6;
    model.hbar = 1.0;
    const auto x = random_point(n, rng, 1.0);
    const double exact = eq_weak_correspondence(model, x);
    const double coarse = std::abs(fock_oracle(model, x, 12) - exact);
    const double fine = std::abs(fock_oracle(model, x, n == 1 ? 32u : 24u) - exact);
    EXPECT_LT(fine, 1e-6 * std::max(1.0, exact)) << "N = " << n;
    EXPECT_LE(fine, coarse) << "N = " << n;
  }
}

TEST(RotSym, FockOracleRejectsLargeSystems) {
  RotSymModel model;
  model.n_dof = kFockOracleMaxDof + 1;
  PhasePoint x{std::vector<double>(model.n_dof), std::vector<double>(model.n_dof)};
  EXPECT_ANY_THROW(fock_oracle(model, x, 8));
}

TEST(RotSym, VerletFlowConservesEnergy) {
  std::mt19937_64 rng(3);
  const auto model = random_model(4, rng);
  const auto start = random_point(4, rng, 1.0);
  const auto traj = classical_flow(model, start, 1e-3, 2000, 100);
  const double e0 = traj.energy.front();
  double drift = 0.0;
  for (double e : traj.energy) drift = std::max(drift, std::abs(e - e0) / e0);
  EXPECT_LT(drift, 1e-5);
  EXPECT_EQ(traj.t.size(), traj.points.size());
  EXPECT_DOUBLE_EQ(traj.t.back(), 2.0);
}

// Relabelling the degrees of freedom commutes with the flow.
TEST(RotSym, FlowIsPermutationEquivariant) {
  std::mt19937_64 rng(11);
  const std::size_t n = 6;
  const auto model = random_model(n, rng);
  const auto start = random_point(n, rng, 1.0);
  std::vector<std::size_t> sigma(n);
  std::iota(sigma.begin(), sigma.end(), 0);
  std::shuffle(sigma.begin(), sigma.end(), rng);
  const auto a = classical_flow(model, permute(start, sigma), 1e-3, 500).points.back();
  const auto b = permute(classical_flow(model, start, 1e-3, 500).points.back(), sigma);
  for (std::size_t k = 0; k < n; ++k) {
    EXPECT_NEAR(a.p[k], b.p[k], 1e-12);
    EXPECT_NEAR(a.q[k], b.q[k], 1e-12);
  }
  EXPECT_NEAR(classical_hamiltonian(model, start), classical_hamiltonian(model, permute(start, sigma)), 1e-12);
}

TEST(RotSym, ClustersGroupNearlyEqualLevels) {
  const auto c = cluster_levels({1.0, 1.0 + 1e-9, 2.0, 3.0, 3.0, 3.0}, 1e-6);
  ASSERT_EQ(c.size(), 3u);
  EXPECT_EQ(c[0].degeneracy, 2u);
  EXPECT_EQ(c[1].degeneracy, 1u);
  EXPECT_EQ(c[2].degeneracy, 3u);
}

// Without the quartic term the naive operator is N free oscillators: levels hbar m0 (k + N/2)
// with multiplicity C(k + N - 1, N - 1).
TEST(RotSym, FreeComparisonReproducesOscillatorShells) {
  RotSymModel model;
  model.n_dof = 2;
  model.m = 1.0;
  model.zeta = 0.5;
  model.v = 0.0;
  const auto cmp = compare_cq_spectrum(model, 12, 10);
  const double m0 = std::sqrt(model.m0_sq());
  const std::vector<double> expected{1, 2, 2, 3, 3, 3, 4, 4, 4, 4};
  ASSERT_EQ(cmp.levels.size(), expected.size());
  for (std::size_t k = 0; k < expected.size(); ++k) EXPECT_NEAR(cmp.levels[k], m0 * expected[k], 1e-9);
}

// The quartic term only raises the spectrum.
TEST(RotSym, InteractingLevelsLieAboveFreeLevels) {
  RotSymModel model;
  model.n_dof = 2;
  model.v = 1.0;
  const auto cmp = compare_cq_spectrum(model, 14, 6);
  const double m0 = std::sqrt(model.m0_sq());
  const std::vector<double> free{1, 2, 2, 3, 3, 3};
  for (std::size_t k = 0; k < free.size(); ++k) EXPECT_GT(cmp.levels[k], m0 * free[k]);
}
