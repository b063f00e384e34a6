#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "eqlab/core/parallel.hpp"
#include "eqlab/hilbert/types.hpp"
#include "eqlab/ultralocal/lattice.hpp"
#include "eqlab/ultralocal/profile.hpp"

namespace eqlab::ultralocal {

using hilbert::cplx;

enum class LimitClass { Gaussian, GeneralizedPoisson, Degenerate, Undetermined };

inline const char* to_string(LimitClass c) {
  switch (c) {
    case LimitClass::Gaussian: return "Gaussian";
    case LimitClass::GeneralizedPoisson: return "GeneralizedPoisson";
    case LimitClass::Degenerate: return "Degenerate";
    case LimitClass::Undetermined: return "Undetermined";
  }
  return "?";
}

/// Levy density A |lambda|^(-gamma) exp(-kappa lambda^2) fitted to a limiting exponent.
struct LevyFit {
  double A = 0.0;
  double gamma = 0.0;
  double kappa = 0.0;
  double residual = std::numeric_limits<double>::infinity();  // sup relative misfit of the exponent

  double density(double lambda) const {
    const double x = std::abs(lambda);
    return A * std::pow(x, -gamma) * std::exp(-kappa * x * x);
  }
};

/// C(theta f) for a family of amplitudes theta on one lattice, or (from continuum_limit) the
/// extrapolated a -> 0 values together with the per-spacing data.
struct SpacingSample {
  LatticeSpec lattice;
  std::vector<cplx> values;          // C(theta_i f)
  std::array<double, 3> cumulants{};  // 2nd, 4th, 6th cumulant of sum_k f_k xi_k / hbar
  double f2_sum = 0.0;                // sum_k f_k^2 a^s
};

struct CharacteristicResult {
  LatticeSpec lattice;
  std::vector<double> thetas;
  std::vector<cplx> values;
  std::vector<cplx> per_site_log_factors;  // at theta = 1, in site order
  std::array<double, 3> cumulants{};
  LimitClass limit_class = LimitClass::Undetermined;
  std::optional<double> fit_B;
  std::optional<LevyFit> levy_fit;
  double kurtosis_functional = std::numeric_limits<double>::quiet_NaN();
  std::vector<SpacingSample> spacings;
  std::string diagnostics;

  std::vector<cplx> log_values() const {
    std::vector<cplx> out;
    for (const auto& c : values) out.push_back(std::log(c));
    return out;
  }
};

/// log of one site's factor E[exp(i f xi / hbar)]. Profiles are even, so the factor is real.
inline cplx log_site_factor(const SiteGroundProfile& profile, double f) {
  const double omf = profile.one_minus_factor(f);
  if (omf < 1.0) return {std::log1p(-omf), 0.0};
  return std::log(cplx(1.0 - omf, 0.0));
}

/// 2nd, 4th, 6th cumulants of xi / hbar from the cached even moments.
inline std::array<double, 3> site_cumulants(const SiteGroundProfile& p) {
  const double m2 = p.moments[0], m4 = p.moments[1], m6 = p.moments[2];
  return {m2, m4 - 3.0 * m2 * m2, m6 - 15.0 * m4 * m2 + 30.0 * m2 * m2 * m2};
}

namespace detail {

/// Per-site log factors for every theta, evaluated once per distinct value theta f_k.
inline std::vector<std::vector<cplx>> site_log_factors(const SiteGroundProfile& profile, const TestFunction& f,
                                                       const std::vector<double>& thetas) {
  std::vector<double> distinct;
  for (double t : thetas)
    for (double v : f.samples) distinct.push_back(t * v);
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  const auto logs = parallel_map(distinct.size(), [&](std::size_t i) { return log_site_factor(profile, distinct[i]); });
  std::map<double, cplx> table;
  for (std::size_t i = 0; i < distinct.size(); ++i) table.emplace(distinct[i], logs[i]);
  std::vector<std::vector<cplx>> out(thetas.size());
  for (std::size_t j = 0; j < thetas.size(); ++j)
    for (double v : f.samples) out[j].push_back(table.at(thetas[j] * v));
  return out;
}

}  // namespace detail

/// C_K(theta f) = prod_k E[exp(i theta f_k xi_k / hbar)], accumulated as a sum of logs in site
/// order so results do not depend on the worker count.
inline CharacteristicResult characteristic_function(const LatticeSpec& spec, const SiteGroundProfile& profile,
                                                    const TestFunction& f, const std::vector<double>& thetas = {1.0}) {
  spec.validate();
  if (f.samples.size() != spec.K) throw ContractViolation("test function has a different number of sites than K");
  for (double v : f.samples)
    if (!std::isfinite(v)) throw DomainError("test function samples must be finite");
  CharacteristicResult out;
  out.lattice = spec;
  out.thetas = thetas;
  std::vector<double> all = thetas;
  const bool need_unit = std::find(thetas.begin(), thetas.end(), 1.0) == thetas.end();
  if (need_unit) all.push_back(1.0);
  const auto logs = detail::site_log_factors(profile, f, all);
  for (std::size_t j = 0; j < thetas.size(); ++j) {
    cplx sum = 0.0;
    for (const auto& l : logs[j]) sum += l;
    // Exact unit value for f = 0: every log is exactly 0.
    out.values.push_back(sum == cplx(0.0) ? cplx(1.0) : std::exp(sum));
  }
  const auto unit = std::find(all.begin(), all.end(), 1.0) - all.begin();
  out.per_site_log_factors = logs[static_cast<std::size_t>(unit)];
  const auto c = site_cumulants(profile);
  for (double v : f.samples) {
    const double v2 = v * v;
    out.cumulants[0] += v2 * c[0];
    out.cumulants[1] += v2 * v2 * c[1];
    out.cumulants[2] += v2 * v2 * v2 * c[2];
  }
  out.kurtosis_functional =
      out.cumulants[0] > 0.0 ? out.cumulants[1] / (out.cumulants[0] * out.cumulants[0]) : 0.0;
  return out;
}

/// Defects of the characteristic-functional axioms on a triple of test functions. The Bochner
/// check is the smallest eigenvalue of the Gram matrix [C(f_i - f_j)].
struct AxiomReport {
  double c_zero_defect = 0.0;     // |C(0) - 1|, must be exactly 0
  double max_modulus = 0.0;       // max |C| over the evaluated functions
  double conjugate_defect = 0.0;  // max |C(-f) - conj C(f)|
  double bochner_min_eigenvalue = 0.0;
  bool ok(double tol = 1e-12) const {
    return c_zero_defect == 0.0 && max_modulus <= 1.0 + tol && conjugate_defect <= tol &&
           bochner_min_eigenvalue >= -tol;
  }
};

inline AxiomReport check_axioms(const LatticeSpec& spec, const SiteGroundProfile& profile,
                                const std::array<TestFunction, 3>& triple) {
  auto C = [&](const TestFunction& f) { return characteristic_function(spec, profile, f).values.front(); };
  auto diff = [](const TestFunction& a, const TestFunction& b) {
    TestFunction d = a;
    for (std::size_t k = 0; k < d.samples.size(); ++k) d.samples[k] -= b.samples[k];
    return d;
  };
  AxiomReport r;
  TestFunction zero;
  zero.samples.assign(spec.K, 0.0);
  r.c_zero_defect = std::abs(C(zero) - cplx(1.0));
  Eigen::Matrix3cd G;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) G(i, j) = C(diff(triple[static_cast<std::size_t>(i)], triple[static_cast<std::size_t>(j)]));
  for (const auto& f : triple) {
    const cplx c = C(f);
    r.max_modulus = std::max(r.max_modulus, std::abs(c));
    r.conjugate_defect = std::max(r.conjugate_defect, std::abs(C(f.scaled(-1.0)) - std::conj(c)));
  }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3cd> es(0.5 * (G + G.adjoint()));
  r.bochner_min_eigenvalue = es.eigenvalues().minCoeff();
  return r;
}

}  // namespace eqlab::ultralocal
