#pragma once

#include <cmath>
#include <memory>
#include <sstream>
#include <vector>

#include "eqlab/hilbert/eigensolver.hpp"
#include "eqlab/hilbert/spectrum.hpp"
#include "eqlab/hilbert/stencil.hpp"
#include "eqlab/ultralocal/lattice.hpp"
#include "eqlab/ultralocal/profile.hpp"
#include "eqlab/ultralocal/sturm_liouville.hpp"

namespace eqlab::ultralocal {

struct SiteSolution {
  SiteGroundProfile profile;
  hilbert::SpectrumResult spectrum;
  SiteModel model;
};

namespace detail {

/// Cubic Lagrange interpolation of tabulated values on a uniform grid; outside -> fallback.
inline double interpolate_uniform(const std::vector<double>& y, double x0, double h, double x, double fallback) {
  const double s = (x - x0) / h;
  const auto n = static_cast<long>(y.size());
  if (!(s >= 0.0) || s > static_cast<double>(n - 1)) return fallback;
  long first = std::clamp(static_cast<long>(std::floor(s)) - 1, 0L, n - 4);
  double acc = 0.0;
  for (int a = 0; a < 4; ++a) {
    double w = 1.0;
    for (int b = 0; b < 4; ++b)
      if (b != a) w *= (s - static_cast<double>(first + b)) / static_cast<double>(a - b);
    acc += w * y[static_cast<std::size_t>(first + a)];
  }
  return acc;
}

inline void check_oscillation(double theta, double max_step, double hbar, const char* where) {
  if (std::abs(theta) * max_step / hbar > 0.5) {
    std::ostringstream msg;
    msg << where << ": test-function value " << theta << " oscillates faster than the site grid resolves "
        << "(phase step " << std::abs(theta) * max_step / hbar << " rad > 0.5)";
    throw ResolutionError(msg.str());
  }
}

}  // namespace detail

struct CqSiteOptions {
  std::size_t points = 1601;   // odd, so phi = 0 is a node
  double width_factor = 9.0;   // half-width in units of sqrt(hbar / (m0 a^s))
  std::size_t n_levels = 6;
  double convergence_tol = 1e-6;  // relative change of E0 against a grid with half the points
};

/// Lattice quartic coupling actually used by the canonical site.
inline double cq_lattice_coupling(const LatticeSpec& spec) {
  return spec.scheme == LatticeScheme::Renormalized ? spec.lambda0 * spec.b * spec.cell_volume() : spec.lambda0;
}

/// One canonical site: a^s { 1/2 [a^(-2s) P^2 + m0^2 Q^2] + lambda Q^4 } on a real-line grid with
/// P = -i hbar d/dphi, i.e. -1/2 hbar^2 a^(-s) d^2/dphi^2 + a^s (m0^2 phi^2 / 2 + lambda phi^4).
inline SiteSolution cq_site_ground(const LatticeSpec& spec, const CqSiteOptions& opts = {}) {
  using namespace hilbert;
  spec.validate();
  if (opts.points < 101) throw ConfigError("cq site grid needs at least 101 points");
  const double as = spec.cell_volume();
  const double lam = cq_lattice_coupling(spec);
  const double half = opts.width_factor * std::sqrt(spec.hbar / (spec.m0 * as));

  auto solve = [&](std::size_t n) {
    const double h = 2.0 * half / static_cast<double>(n - 1);
    const auto g = staggered_gradient(n, h, 4, EdgeCondition::Dirichlet, EdgeCondition::Dirichlet);
    RSparse H = (0.5 * spec.hbar * spec.hbar / as) * RSparse(RSparse(g.matrix.transpose()) * g.matrix);
    for (std::size_t j = 0; j < n; ++j) {
      const double x = -half + h * static_cast<double>(j);
      H.coeffRef(j, j) += as * (0.5 * spec.m0 * spec.m0 * x * x + lam * x * x * x * x);
    }
    H = 0.5 * (H + RSparse(H.transpose()));
    return std::make_pair(lowest_eigenpairs<double>(H, opts.n_levels), h);
  };
  auto [pairs, h] = solve(opts.points);
  const auto coarse = solve((opts.points - 1) / 2 + 1).first;
  const double e0 = pairs.values(0);
  if (std::abs(coarse.values(0) - e0) > opts.convergence_tol * std::max(1.0, std::abs(e0))) {
    std::ostringstream msg;
    msg << "cq_site_ground: ground energy changes by " << std::abs(coarse.values(0) - e0)
        << " under grid refinement; widen or refine the grid";
    throw ConvergenceError(msg.str());
  }

  const std::size_t n = opts.points;
  std::vector<double> xi(n), rho(n);
  for (std::size_t j = 0; j < n; ++j) {
    xi[j] = (-half + h * static_cast<double>(j)) * as;
    const double v = pairs.vectors(static_cast<Eigen::Index>(j), 0);
    rho[j] = v * v;
  }
  for (std::size_t j = 0; j < n / 2; ++j) {  // exact even symmetry
    const double m = 0.5 * (rho[j] + rho[n - 1 - j]);
    rho[j] = rho[n - 1 - j] = m;
  }
  double total = 0.0;
  for (double r : rho) total += r;
  for (double& r : rho) r /= total;

  SiteSolution out;
  out.model = {SiteKind::CanonicalQuartic, 0.75, e0};
  auto& prof = out.profile;
  prof.kind = ProfileKind::NumericY;
  prof.hbar = spec.hbar;
  prof.cell_volume = as;
  prof.normalization = 1.0;
  prof.description = "numeric canonical site density";
  for (int j = 1; j <= 4; ++j) {
    double m = 0.0;
    for (std::size_t k = 0; k < n; ++k) m += rho[k] * std::pow(xi[k] / spec.hbar, 2 * j);
    prof.moments[static_cast<std::size_t>(j - 1)] = m;
  }
  auto xi_ptr = std::make_shared<const std::vector<double>>(xi);
  auto rho_ptr = std::make_shared<const std::vector<double>>(rho);
  const double dxi = h * as;
  const double hbar = spec.hbar;
  prof.one_minus_factor = [xi_ptr, rho_ptr, dxi, hbar](double theta) {
    if (theta == 0.0) return 0.0;
    detail::check_oscillation(theta, dxi, hbar, "canonical site");
    double s = 0.0;
    for (std::size_t k = 0; k < xi_ptr->size(); ++k) {
      const double hs = std::sin(0.5 * theta * (*xi_ptr)[k] / hbar);
      s += (*rho_ptr)[k] * 2.0 * hs * hs;
    }
    return s;
  };
  std::vector<double> logrho(n);
  const double rho0 = rho[n / 2];
  for (std::size_t k = 0; k < n; ++k) logrho[k] = -std::log(std::max(rho[k], 1e-300) / rho0);
  const double xi0 = xi.front();
  prof.evaluator = [logrho, xi0, dxi](double lambda) {
    return detail::interpolate_uniform(logrho, xi0, dxi, std::abs(lambda), std::numeric_limits<double>::infinity());
  };

  out.spectrum.eigenvalues.assign(pairs.values.data(), pairs.values.data() + pairs.values.size());
  for (double& e : out.spectrum.eigenvalues) e -= e0;
  out.spectrum.eigenvalues.front() = 0.0;
  out.spectrum.e0_subtracted = true;
  out.spectrum.solver_meta = {n, pairs.method, pairs.max_residual, std::abs(coarse.values(0) - e0), e0};
  return out;
}

enum class EqBranch { Singular, Regular };

struct EqSiteOptions {
  std::size_t points = 2000;
  double decades_below = 3.5;  // grid starts at 10^-decades_below times the width scale
  double width_factor = 8.0;    // grid ends at this multiple of the width scale
  std::size_t n_levels = 6;
  EqBranch branch = EqBranch::Singular;
  bool spike_limit = false;     // use F = 3/4 exactly (the a -> 0 limit) with the regular branch
  double convergence_tol = 1e-6;
};

struct EqLatticeCouplings {
  double mass;
  double quartic;
};

inline EqLatticeCouplings eq_lattice_couplings(const LatticeSpec& spec) {
  if (spec.scheme == LatticeScheme::Renormalized) {
    const double e = spec.epsilon();
    return {e * spec.m0, spec.lambda0 * e * e * e * e};
  }
  return {spec.m0, spec.lambda0};
}

/// Extra data of the affine site beyond the shared profile.
struct EqSiteDetails {
  double alpha = 0.0;                // psi = phi^alpha chi near the origin
  double normalization_check = 0.0;  // -int phi^(2 eps) dG/dphi dphi with G = e^{-Z a^s}
  std::vector<double> u;             // ln phi nodes
  std::vector<double> chi;           // regular factor, normalized over the full line
};

/// One affine site: 1/2 hbar^2 a^(-s) [-d^2/dphi^2 + F / phi^2] + a^s (m^2 phi^2 / 2 + lambda phi^4) on
/// phi > 0, extended evenly to the real line.
///
/// Near the origin the solutions behave as phi^(1/2 -+ nu) with nu = 1 - b a^s. Writing
/// psi = phi^alpha chi turns the problem into a Sturm-Liouville problem for the regular factor chi
/// in u = ln phi with p = hbar^2 a^(-s) e^{(2 alpha - 1) u} / 2, q = a^s V e^{(2 alpha + 1) u} and
/// weight w = e^{(2 alpha + 1) u}. chi has zero slope at the origin (Neumann mirror at the left end)
/// and the mass of the region below the grid is folded into node 0.
inline SiteSolution eq_site_ground(const LatticeSpec& spec, const EqSiteOptions& opts = {},
                                   EqSiteDetails* details = nullptr) {
  spec.validate();
  const double eps = opts.spike_limit ? 0.0 : spec.epsilon();
  const double nu = 1.0 - eps;
  const EqBranch branch = opts.spike_limit ? EqBranch::Regular : opts.branch;
  const double alpha = branch == EqBranch::Singular ? 0.5 - nu : 0.5 + nu;
  const double c = 2.0 * alpha + 1.0;  // weight exponent, 2 eps on the singular branch
  const double as = spec.cell_volume();
  const auto [mass, quartic] = eq_lattice_couplings(spec);
  const double hbar = spec.hbar;
  const double scale = std::sqrt(hbar / (as * mass));
  const double kin = 0.5 * hbar * hbar / as;

  auto problem = [&](std::size_t n) {
    SturmLiouvilleProblem p;
    p.u_lo = std::log(scale) - opts.decades_below * std::log(10.0);
    p.u_hi = std::log(scale * opts.width_factor);
    p.points = n;
    p.p = [=](double u) { return kin * std::exp((2.0 * alpha - 1.0) * u); };
    p.q = [=](double u) {
      const double x2 = std::exp(2.0 * u);
      return as * (0.5 * mass * mass * x2 + quartic * x2 * x2) * std::exp(c * u);
    };
    p.w = [=](double u) { return std::exp(c * u); };
    const double edge = p.u_lo - 0.5 * p.step();
    p.left_tail_weight = std::exp(c * edge) / c;
    p.left_tail_potential = as * (0.5 * mass * mass * std::exp((c + 2.0) * edge) / (c + 2.0) +
                                  quartic * std::exp((c + 4.0) * edge) / (c + 4.0));
    return p;
  };
  const auto prob = problem(opts.points);
  const auto sol = solve_sturm_liouville(prob, opts.n_levels);
  const auto coarse = solve_sturm_liouville(problem(opts.points / 2), opts.n_levels);
  const double e0 = sol.values(0);
  const double gap = sol.values.size() > 1 ? sol.values(1) - e0 : 1.0;
  // Convergence is judged on the gap scale: E0 itself may be tiny compared with the level spacing.
  if (std::abs(coarse.values(0) - e0) > opts.convergence_tol * std::max(std::abs(e0), std::abs(gap))) {
    std::ostringstream msg;
    msg << "eq_site_ground: ground energy changes by " << std::abs(coarse.values(0) - e0)
        << " under grid refinement; widen or refine the grid";
    throw ConvergenceError(msg.str());
  }

  const std::size_t n = opts.points;
  const double h = prob.step();
  std::vector<double> u(n), chi(n), cell(n);
  for (std::size_t j = 0; j < n; ++j) {
    u[j] = prob.node(j);
    chi[j] = sol.vectors(static_cast<Eigen::Index>(j), 0);
    cell[j] = h * prob.w(u[j]);  // node mass without the folded tail
  }
  const double tail_weight = prob.left_tail_weight;
  const double edge = prob.u_lo - 0.5 * h;

  SiteSolution out;
  out.model = {SiteKind::AffineSpiked, opts.spike_limit ? 0.75 : regularized_F(spec), e0};
  auto& prof = out.profile;
  prof.kind = ProfileKind::NumericZ;
  prof.hbar = hbar;
  prof.cell_volume = as;
  prof.description = branch == EqBranch::Singular ? "numeric affine site, singular branch"
                                                  : "numeric affine site, regular branch";
  double total = tail_weight * chi[0] * chi[0];
  for (std::size_t j = 0; j < n; ++j) total += cell[j] * chi[j] * chi[j];
  prof.normalization = total;
  const double log_as = std::log(as);
  for (int j = 1; j <= 4; ++j) {
    double m = 0.0;
    for (std::size_t k = 0; k < n; ++k) m += cell[k] * chi[k] * chi[k] * std::exp(2.0 * j * (u[k] + log_as));
    // Region below the grid, chi = chi_0 there.
    m += chi[0] * chi[0] * std::exp((c + 2.0 * j) * edge + 2.0 * j * log_as) / (c + 2.0 * j);
    prof.moments[static_cast<std::size_t>(j - 1)] = m / std::pow(hbar, 2 * j);
  }
  auto shared_u = std::make_shared<const std::vector<double>>(u);
  auto shared_mass = std::make_shared<std::vector<double>>(n);
  for (std::size_t k = 0; k < n; ++k) (*shared_mass)[k] = cell[k] * chi[k] * chi[k];
  const double chi0sq = chi[0] * chi[0];
  prof.one_minus_factor = [shared_u, shared_mass, chi0sq, c, edge, log_as, hbar, h](double theta) {
    if (theta == 0.0) return 0.0;
    const double w = std::abs(theta) / hbar;
    double s = 0.0;
    double max_phase_step = 0.0;
    for (std::size_t k = 0; k < shared_u->size(); ++k) {
      const double xi = std::exp((*shared_u)[k] + log_as);
      const double hs = std::sin(0.5 * w * xi);
      s += (*shared_mass)[k] * 2.0 * hs * hs;
      if ((*shared_mass)[k] > 1e-14) max_phase_step = std::max(max_phase_step, w * xi * h);
    }
    detail::check_oscillation(1.0, max_phase_step, 1.0, "affine site");
    // Below the grid 1 - cos(w xi) = (w xi)^2 / 2 to the accuracy needed.
    s += chi0sq * 0.5 * w * w * std::exp((c + 2.0) * edge + 2.0 * log_as) / (c + 2.0);
    return s;
  };
  std::vector<double> zvals(n);
  for (std::size_t k = 0; k < n; ++k) zvals[k] = -std::log(std::max(chi[k] * chi[k], 1e-300) / chi0sq);
  const double u0 = u.front();
  prof.evaluator = [zvals, u0, h, log_as](double lambda) {
    const double x = std::abs(lambda);
    if (x == 0.0) return 0.0;
    const double uu = std::log(x) - log_as;
    if (uu < u0) return 0.0;
    return detail::interpolate_uniform(zvals, u0, h, uu, std::numeric_limits<double>::infinity());
  };

  if (details) {
    details->alpha = alpha;
    details->u = u;
    // Full-line normalization: each half-line carries 1/2, so chi_full^2 = chi^2 / 2.
    details->chi.resize(n);
    for (std::size_t k = 0; k < n; ++k) details->chi[k] = chi[k] / std::sqrt(2.0);
    // G(phi) = e^{-Z a^s} = rho(phi) |phi|^(1 - 2 eps) / eps = chi_full^2 / eps on the singular branch,
    // and -int_0^inf phi^(2 eps) G' dphi = -int e^{2 eps u} G_u du must be 1.
    if (branch == EqBranch::Singular && eps > 0.0) {
      // G_u from a fourth-order central difference at the nodes, then the trapezoid rule in u,
      // which is spectrally accurate here because G_u decays at both ends.
      std::vector<double> G(n);
      for (std::size_t k = 0; k < n; ++k) G[k] = details->chi[k] * details->chi[k] / eps;
      const auto cw = hilbert::central_first_derivative_weights(4);
      auto at = [&](long k) { return G[static_cast<std::size_t>(std::clamp(k, 0L, static_cast<long>(n) - 1))]; };
      double integral = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        const long kk = static_cast<long>(k);
        double gu = 0.0;
        for (std::size_t i = 1; i <= cw.size(); ++i) {
          const long d = static_cast<long>(i);
          gu += cw[i - 1] * (at(kk + d) - (kk - d < 0 ? at(-(kk - d) - 1) : at(kk - d)));
        }
        gu /= h;
        const double wgt = (k == 0 || k + 1 == n) ? 0.5 * h : h;
        integral -= wgt * std::exp(2.0 * eps * u[k]) * gu;
      }
      // The region below the grid cancels the lower boundary term of the integration by parts,
      // leaving only the (negligible) upper boundary term.
      details->normalization_check = integral + G[n - 1] * std::exp(2.0 * eps * u[n - 1]);
    }
  }

  out.spectrum.eigenvalues.assign(sol.values.data(), sol.values.data() + sol.values.size());
  for (double& e : out.spectrum.eigenvalues) e -= e0;
  out.spectrum.eigenvalues.front() = 0.0;
  out.spectrum.e0_subtracted = true;
  out.spectrum.solver_meta = {n, sol.method, sol.residual, std::abs(coarse.values(0) - e0), e0};
  return out;
}

}  // namespace eqlab::ultralocal
