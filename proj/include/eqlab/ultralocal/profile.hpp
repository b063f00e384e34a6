#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>
#include <string>

#include "eqlab/core/error.hpp"
#include "eqlab/ultralocal/lattice.hpp"

namespace eqlab::ultralocal {

enum class ProfileKind { NumericY, NumericZ, FreeModelZ };

inline const char* to_string(ProfileKind k) {
  switch (k) {
    case ProfileKind::NumericY: return "NumericY";
    case ProfileKind::NumericZ: return "NumericZ";
    case ProfileKind::FreeModelZ: return "FreeModelZ";
  }
  return "?";
}

/// Single-site ground-state distribution of the rescaled field xi = phi a^s.
///
/// evaluator(lambda) is the profile exponent at xi = lambda, normalized to vanish at 0:
///   NumericY:   -ln(rho(lambda) / rho(0)), the log-density of the canonical site;
///   NumericZ:   z(lambda) = (Z(lambda / a^s) - Z(0)) a^s, the regular factor of the affine site;
///   FreeModelZ: the analytic z(lambda) of the free affine model (or a plugged-in one).
/// one_minus_factor(theta) is E[1 - cos(theta xi / hbar)], so the per-site characteristic
/// function is 1 minus it. Keeping the complement avoids cancellation when the site factor is
/// 1 - O(b a^s).
struct SiteGroundProfile {
  ProfileKind kind = ProfileKind::NumericY;
  std::function<double(double)> evaluator;
  std::function<double(double)> one_minus_factor;
  std::array<double, 4> moments{};  // E[(xi/hbar)^(2j)], j = 1..4
  double normalization = 1.0;       // total probability captured by the representation
  double hbar = 1.0;
  double cell_volume = 1.0;
  std::string description;

  double site_factor(double theta) const { return 1.0 - one_minus_factor(theta); }
  double log_site_factor(double theta) const { return std::log1p(-one_minus_factor(theta)); }
};

/// Adaptive trapezoid rule for a smooth integrand that decays at both ends of [lo, hi]; the step
/// is halved until two successive sums agree to rel_tol.
template <class Fn>
double trapezoid_converged(Fn&& g, double lo, double hi, double rel_tol = 1e-12, double h0 = 0.05,
                           int max_halvings = 14) {
  auto sum_at = [&](double h) {
    const auto n = static_cast<std::size_t>(std::ceil((hi - lo) / h));
    const double step = (hi - lo) / static_cast<double>(n);
    double s = 0.5 * (g(lo) + g(hi));
    for (std::size_t i = 1; i < n; ++i) s += g(lo + step * static_cast<double>(i));
    return s * step;
  };
  double h = h0;
  double prev = sum_at(h);
  for (int k = 0; k < max_halvings; ++k) {
    h *= 0.5;
    const double cur = sum_at(h);
    if (std::abs(cur - prev) <= rel_tol * std::abs(cur) + 1e-300) return cur;
    prev = cur;
  }
  std::ostringstream msg;
  msg << "quadrature did not converge on [" << lo << ", " << hi << "] at step " << h;
  throw ResolutionError(msg.str());
}

/// Levy-type site profile: density eps c |xi|^(-1+2 eps) exp(-z(xi)) on the real line, with
/// eps = b a^s and c fixed by normalization. z must be even with z(0) = 0 and grow at infinity.
/// When kappa > 0 is given, z is taken as kappa xi^2 and the closed-form c = kappa^eps / Gamma(1+eps)
/// is used.
inline SiteGroundProfile make_levy_profile(const LatticeSpec& spec, std::function<double(double)> z,
                                           double kappa_hint, std::string description) {
  spec.validate();
  const double eps = spec.epsilon();
  const double hbar = spec.hbar;
  // Integration in t = ln xi. The upper end is where z exceeds 745 (exp underflows).
  double t_hi = 0.0;
  while (z(std::exp(t_hi)) < 745.0) {
    t_hi += 0.25;
    if (t_hi > 50.0) throw DomainError("Levy profile: z does not grow at large |xi|");
  }
  double c = 0.0;
  if (kappa_hint > 0.0) {
    c = std::pow(kappa_hint, eps) / std::tgamma(1.0 + eps);
  } else {
    // 1 = 2 eps c int_0^inf xi^(-1+2eps) e^{-z} dxi. Below t_lo, e^{-z} = 1 to 1e-16 relative
    // for a smooth z with z(0) = 0, and the tail integrates to e^{2 eps t_lo} / (2 eps).
    double t_lo = -1.0;
    while (z(std::exp(t_lo)) > 1e-16) t_lo -= 1.0;
    const double body = trapezoid_converged([&](double t) { return std::exp(2.0 * eps * t - z(std::exp(t))); }, t_lo,
                                            t_hi, 1e-13);
    c = 1.0 / (2.0 * eps * (body + std::exp(2.0 * eps * t_lo) / (2.0 * eps)));
  }
  SiteGroundProfile out;
  out.kind = ProfileKind::FreeModelZ;
  out.evaluator = [z](double lambda) { return z(std::abs(lambda)); };
  out.hbar = hbar;
  out.cell_volume = spec.cell_volume();
  out.description = std::move(description);
  out.one_minus_factor = [=](double theta) {
    if (theta == 0.0) return 0.0;
    const double w = std::abs(theta) / hbar;
    // Below t_lo, 1 - cos(w xi) = (w xi)^2 / 2 to 1e-18 relative; that piece is integrated exactly.
    const double t_lo = std::log(1e-9 / w);
    const double body = trapezoid_converged(
        [&](double t) {
          const double x = w * std::exp(t);
          const double s = std::sin(0.5 * x);
          return 2.0 * s * s * std::exp(2.0 * eps * t - z(std::exp(t)));
        },
        t_lo, t_hi, 1e-12);
    const double tail = 0.5 * w * w * std::exp((2.0 + 2.0 * eps) * t_lo) / (2.0 + 2.0 * eps);
    return 2.0 * eps * c * (body + tail);
  };
  for (int j = 1; j <= 4; ++j) {
    double m = 0.0;
    if (kappa_hint > 0.0) {
      // E[xi^(2j)] = Gamma(eps + j) / (Gamma(eps) kappa^j)
      m = std::exp(std::lgamma(eps + j) - std::lgamma(eps)) / std::pow(kappa_hint, j);
    } else {
      m = 2.0 * eps * c *
          trapezoid_converged([&](double t) { return std::exp((2.0 * eps + 2.0 * j) * t - z(std::exp(t))); },
                              std::log(1e-12), t_hi, 1e-13);
    }
    out.moments[static_cast<std::size_t>(j - 1)] = m / std::pow(hbar, 2 * j);
  }
  return out;
}

/// The free affine model: z(xi) = b m0 xi^2 / hbar.
inline SiteGroundProfile free_model_profile(const LatticeSpec& spec) {
  const double kappa = spec.b * spec.m0 / spec.hbar;
  return make_levy_profile(
      spec, [kappa](double x) { return kappa * x * x; }, kappa, "free affine model, z = b m0 xi^2 / hbar");
}

/// The Poisson exponent of one site in the limit b a^s -> 0:
///   J(theta) = int_R [1 - cos(theta lambda / hbar)] e^{-z(lambda)} d lambda / |lambda|,
/// so that the continuum log C = -b int d^s x J(f(x)).
inline double poisson_exponent(double theta, double hbar, const std::function<double(double)>& z) {
  if (theta == 0.0) return 0.0;
  const double w = std::abs(theta) / hbar;
  double t_hi = 0.0;
  while (z(std::exp(t_hi)) < 745.0) t_hi += 0.25;
  const double t_lo = std::log(1e-9 / w);
  const double body = trapezoid_converged(
      [&](double t) {
        const double s = std::sin(0.5 * w * std::exp(t));
        return 2.0 * s * s * std::exp(-z(std::exp(t)));
      },
      t_lo, t_hi, 1e-12);
  return 2.0 * (body + 0.25 * w * w * std::exp(2.0 * t_lo));
}

}  // namespace eqlab::ultralocal
