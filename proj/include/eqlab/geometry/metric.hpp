#pragma once

#include <array>
#include <cmath>
#include <sstream>

#include "eqlab/geometry/coherent.hpp"
#include "eqlab/geometry/weak.hpp"

namespace eqlab::geometry {

struct MetricSample {
  CoherentLabel label;
  double g_pp = 0.0;
  double g_pq = 0.0;
  double g_qq = 0.0;
  double scalar_curvature = 0.0;
  double fd_step = 0.0;

  double determinant() const { return g_pp * g_qq - g_pq * g_pq; }
};

struct MetricOptions {
  double fd_step = 1e-3;          // tangent finite-difference step, Richardson-extrapolated with 2*fd_step
  double curvature_step = 1e-2;   // spacing of the 3x3 stencil of metric samples (plus one at twice it)
  bool compute_curvature = true;
};

namespace detail {

/// Tangent d|psi>/dt along (dp, dq) from central differences at steps h and 2h combined by one
/// Richardson level, so the truncation error is O(h^4).
template <CoherentFamily F>
CVector tangent(const F& family, double p, double q, double dp, double dq, double h) {
  auto central = [&](double s) {
    return CVector((family.state(p + s * dp, q + s * dq) - family.state(p - s * dp, q - s * dq)) / (2.0 * s));
  };
  return (4.0 * central(h) - central(2.0 * h)) / 3.0;
}

struct Components {
  double pp, pq, qq;
};

template <CoherentFamily F>
Components metric_components(const F& family, double p, double q, double h) {
  const CVector psi = family.state(p, q);
  const CVector tp = tangent(family, p, q, 1.0, 0.0, h);
  const CVector tq = tangent(family, p, q, 0.0, 1.0, h);
  auto g = [&](const CVector& a, const CVector& b) {
    return 2.0 * family.hbar() * (a.dot(b) - a.dot(psi) * psi.dot(b)).real();
  };
  return {g(tp, tp), g(tp, tq), g(tq, tq)};
}

/// Gaussian curvature from metric samples on a 3x3 stencil (index [i][j] at p + (i-1)d, q + (j-1)d)
/// by Brioschi's formula, which needs only the metric and its first and second derivatives.
inline double gaussian_curvature(const std::array<std::array<Components, 3>, 3>& s, double d) {
  auto du = [&](auto f) { return (f(s[2][1]) - f(s[0][1])) / (2.0 * d); };
  auto dv = [&](auto f) { return (f(s[1][2]) - f(s[1][0])) / (2.0 * d); };
  auto duu = [&](auto f) { return (f(s[2][1]) - 2.0 * f(s[1][1]) + f(s[0][1])) / (d * d); };
  auto dvv = [&](auto f) { return (f(s[1][2]) - 2.0 * f(s[1][1]) + f(s[1][0])) / (d * d); };
  auto duv = [&](auto f) { return (f(s[2][2]) - f(s[2][0]) - f(s[0][2]) + f(s[0][0])) / (4.0 * d * d); };
  auto E = [](const Components& c) { return c.pp; };
  auto Fm = [](const Components& c) { return c.pq; };
  auto G = [](const Components& c) { return c.qq; };
  const double e = s[1][1].pp, f = s[1][1].pq, g = s[1][1].qq;
  const double Eu = du(E), Ev = dv(E), Fu = du(Fm), Fv = dv(Fm), Gu = du(G), Gv = dv(G);
  const double Evv = dvv(E), Guu = duu(G), Fuv = duv(Fm);
  auto det3 = [](double a11, double a12, double a13, double a21, double a22, double a23, double a31, double a32,
                 double a33) {
    return a11 * (a22 * a33 - a23 * a32) - a12 * (a21 * a33 - a23 * a31) + a13 * (a21 * a32 - a22 * a31);
  };
  const double first = det3(-0.5 * Evv + Fuv - 0.5 * Guu, 0.5 * Eu, Fu - 0.5 * Ev, Fv - 0.5 * Gu, e, f, 0.5 * Gv, f, g);
  const double second = det3(0.0, 0.5 * Ev, 0.5 * Gu, 0.5 * Ev, e, f, 0.5 * Gu, f, g);
  const double w = e * g - f * f;
  return (first - second) / (w * w);
}

}  // namespace detail

/// Pull-back of the scaled Fubini-Study metric 2 hbar [ ||d psi||^2 - |<psi|d psi>|^2 ] to the
/// (p, q) labels, with the scalar curvature R = 2K of the resulting surface.
template <CoherentFamily F>
MetricSample fubini_study_metric(const CoherentLabel& label, const F& family, const MetricOptions& opts = {}) {
  label.validate();
  if (label.variant != family.variant()) throw ContractViolation("label variant does not match family");
  if (!(opts.fd_step > 0.0) || !(opts.curvature_step > 0.0)) throw ConfigError("metric steps must be positive");
  if (label.variant == CoherentVariant::Affine && label.q <= 2.0 * opts.fd_step + (opts.compute_curvature ? 2.0 * opts.curvature_step : 0.0))
    throw DomainError("affine metric stencil reaches q <= 0");
  MetricSample out;
  out.label = label;
  out.fd_step = opts.fd_step;
  const auto c = detail::metric_components(family, label.p, label.q, opts.fd_step);
  out.g_pp = c.pp;
  out.g_pq = c.pq;
  out.g_qq = c.qq;
  if (!(out.g_pp > 0.0 && out.determinant() > 0.0)) {
    std::ostringstream msg;
    msg << "metric at (p, q) = (" << label.p << ", " << label.q << ") is not positive definite: g_pp = " << out.g_pp
        << ", det = " << out.determinant() << "; refine the basis or change fd_step";
    throw ResolutionError(msg.str());
  }
  if (opts.compute_curvature) {
    // Curvature from stencils at spacing d and 2d, combined by one Richardson level; the
    // second-derivative stencil error is O(d^2 / q^2) on the affine half-plane.
    auto stencil_curvature = [&](double d) {
      std::array<std::array<detail::Components, 3>, 3> s{};
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
          s[i][j] = (i == 1 && j == 1)
                        ? c
                        : detail::metric_components(family, label.p + (i - 1) * d, label.q + (j - 1) * d, opts.fd_step);
      return 2.0 * detail::gaussian_curvature(s, d);
    };
    const double d = opts.curvature_step;
    out.scalar_curvature = (4.0 * stencil_curvature(d) - stencil_curvature(2.0 * d)) / 3.0;
  }
  return out;
}

/// Kinetic and Hamiltonian parts of the reduced action integrand at one point of a path.
struct ActionIntegrand {
  double kinetic_term = 0.0;      // <psi| i hbar d/dt |psi>
  double hamiltonian_term = 0.0;  // <psi| H |psi>
};

/// Evaluates i hbar <psi|d psi/dt> along the label velocity (p_dot, q_dot) by Richardson-extrapolated
/// central differences, together with the weak-correspondence value of H at the point.
template <CoherentFamily F>
ActionIntegrand reduced_action_integrand(const CoherentLabel& label, double p_dot, double q_dot, const F& family,
                                         const hilbert::OperatorMatrix& H, double fd_step = 1e-3) {
  label.validate();
  ActionIntegrand out;
  out.hamiltonian_term = weak_correspondence(H, label, family);
  if (p_dot == 0.0 && q_dot == 0.0) return out;
  const CVector psi = family.state(label.p, label.q);
  const CVector t = detail::tangent(family, label.p, label.q, p_dot, q_dot, fd_step);
  out.kinetic_term = (kI * family.hbar() * psi.dot(t)).real();
  return out;
}

}  // namespace eqlab::geometry
