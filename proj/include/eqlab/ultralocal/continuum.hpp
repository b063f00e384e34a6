#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <unsupported/Eigen/NonLinearOptimization>
#include <unsupported/Eigen/NumericalDiff>

#include "eqlab/core/error.hpp"
#include "eqlab/ultralocal/characteristic.hpp"
#include "eqlab/ultralocal/lattice.hpp"
#include "eqlab/ultralocal/profile.hpp"

namespace eqlab::ultralocal {

using ProfileBuilder = std::function<SiteGroundProfile(const LatticeSpec&)>;

struct ContinuumOptions {
  std::vector<double> thetas{0.25, 0.5, 1.0, 2.0};
  double monotone_tol = 1e-9;        // relative wiggle in log C below which a sequence counts as flat
  double gaussian_kurtosis = 1e-3;   // |kappa_4 / kappa_2^2| of the limit functional
  double poisson_residual = 0.05;    // sup relative misfit of the fitted Levy exponent
  double degenerate_log = 1e-12;
};

/// Value at x = 0 of the polynomial through (x_i, y_i) (Neville's scheme).
inline double neville_at_zero(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.empty()) throw ContractViolation("neville_at_zero: mismatched samples");
  std::vector<double> p = y;
  const std::size_t n = x.size();
  for (std::size_t m = 1; m < n; ++m)
    for (std::size_t i = 0; i + m < n; ++i) p[i] = (x[i + m] * p[i] - x[i] * p[i + 1]) / (x[i + m] - x[i]);
  return p[0];
}

/// Tensor 30-point Gauss-Legendre rule on the cube [0, L]^s.
struct CubeRule {
  std::vector<std::vector<double>> nodes;
  std::vector<double> weights;
};

inline CubeRule cube_rule(int s, double L) {
  using Rule = boost::math::quadrature::gauss<double, 30>;
  // Boost stores the non-negative half of the symmetric rule.
  std::vector<double> x1, w1;
  for (std::size_t i = 0; i < Rule::abscissa().size(); ++i) {
    const double x = Rule::abscissa()[i];
    const double w = Rule::weights()[i];
    x1.push_back(0.5 * L * (1.0 + x));
    w1.push_back(0.5 * L * w);
    if (x != 0.0) {
      x1.push_back(0.5 * L * (1.0 - x));
      w1.push_back(0.5 * L * w);
    }
  }
  const std::size_t m = x1.size();
  std::size_t total = 1;
  for (int d = 0; d < s; ++d) total *= m;
  CubeRule rule;
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t r = idx;
    std::vector<double> x(static_cast<std::size_t>(s));
    double w = 1.0;
    for (int d = 0; d < s; ++d) {
      x[static_cast<std::size_t>(d)] = x1[r % m];
      w *= w1[r % m];
      r /= m;
    }
    rule.nodes.push_back(std::move(x));
    rule.weights.push_back(w);
  }
  return rule;
}

inline double cube_integral(const std::function<double(const std::vector<double>&)>& g, int s, double L) {
  const auto rule = cube_rule(s, L);
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.weights.size(); ++i) sum += rule.weights[i] * g(rule.nodes[i]);
  return sum;
}

/// Closed generalized-Poisson form log C_0(theta f) = -b int d^s x J(theta f(x)) with the exponent
/// J of poisson_exponent.
inline double poisson_log_functional(double b, double hbar, const std::function<double(double)>& z,
                                     const FieldFunction& f, int s, double L, double theta = 1.0) {
  return -b * cube_integral([&](const std::vector<double>& x) { return poisson_exponent(theta * f.fn(x), hbar, z); },
                            s, L);
}

namespace detail {

/// 2 int_0^inf (1 - cos w l) l^(-gamma) exp(-kappa l^2) dl, trapezoid rule in t = ln l.
inline double levy_exponent_unit(double w, double gamma, double kappa) {
  w = std::abs(w);
  if (w == 0.0) return 0.0;
  const double t_hi = 0.5 * std::log(40.0 / kappa);
  const double t_lo = std::log(1e-6 / w);
  if (t_hi <= t_lo) return 0.0;
  const double h = std::min(0.02, 0.25 / (w * std::exp(t_hi)));
  const auto n = static_cast<std::size_t>(std::ceil((t_hi - t_lo) / h));
  const double step = (t_hi - t_lo) / static_cast<double>(n);
  double sum = 0.0;
  for (std::size_t i = 0; i <= n; ++i) {
    const double t = t_lo + step * static_cast<double>(i);
    const double l = std::exp(t);
    const double s = std::sin(0.5 * w * l);
    const double v = 2.0 * s * s * std::exp((1.0 - gamma) * t - kappa * l * l);
    sum += (i == 0 || i == n) ? 0.5 * v : v;
  }
  // Below t_lo, 1 - cos(w l) = (w l)^2 / 2 and the Gaussian factor is 1.
  const double tail = 0.5 * w * w * std::exp((3.0 - gamma) * t_lo) / (3.0 - gamma);
  return 2.0 * (sum * step + tail);
}

struct LevyResidual {
  using Scalar = double;
  enum { InputsAtCompileTime = Eigen::Dynamic, ValuesAtCompileTime = Eigen::Dynamic };
  using InputType = Eigen::VectorXd;
  using ValueType = Eigen::VectorXd;
  using JacobianType = Eigen::MatrixXd;

  std::vector<double> thetas;
  std::vector<double> data;  // -log C_0(theta f) > 0
  std::vector<double> qx_f;  // f at the spatial quadrature nodes
  std::vector<double> qx_w;
  double hbar = 1.0;

  int inputs() const { return 3; }
  int values() const { return static_cast<int>(thetas.size()); }

  // x = (ln A, gamma, ln kappa)
  double model(const Eigen::VectorXd& x, double theta) const {
    double s = 0.0;
    for (std::size_t q = 0; q < qx_f.size(); ++q)
      s += qx_w[q] * levy_exponent_unit(theta * qx_f[q] / hbar, x(1), std::exp(x(2)));
    return std::exp(x(0)) * s;
  }
  int operator()(const Eigen::VectorXd& x, Eigen::VectorXd& fvec) const {
    fvec.resize(values());
    if (!(x(1) > -1.0 && x(1) < 2.9) || std::abs(x(2)) > 30.0 || std::abs(x(0)) > 50.0) {
      fvec.setConstant(1e3);
      return 0;
    }
    for (std::size_t i = 0; i < thetas.size(); ++i) fvec(static_cast<Eigen::Index>(i)) = model(x, thetas[i]) / data[i] - 1.0;
    return 0;
  }
};

}  // namespace detail

/// Fits A |lambda|^(-gamma) exp(-kappa lambda^2) to the limiting exponent -log C_0(theta f) over
/// the sampled amplitudes theta, by Levenberg-Marquardt on relative residuals.
inline LevyFit fit_levy_density(const std::vector<double>& thetas, const std::vector<double>& exponent,
                                const FieldFunction& f, int s, double L, double hbar) {
  detail::LevyResidual fun;
  fun.thetas = thetas;
  fun.data = exponent;
  fun.hbar = hbar;
  const auto rule = cube_rule(s, L);
  for (const auto& x : rule.nodes) fun.qx_f.push_back(f.fn(x));
  fun.qx_w = rule.weights;
  for (double e : exponent)
    if (!(e > 0.0)) throw NumericalError("Levy fit needs a positive exponent at every amplitude");

  LevyFit best;
  for (double g0 : {1.0, 0.5, 1.5}) {
    Eigen::VectorXd x(3);
    x << 0.0, g0, 0.0;
    // A enters linearly; start from the least-squares scale for the initial shape.
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < thetas.size(); ++i) {
      const double m = fun.model(x, thetas[i]) / exponent[i];
      num += m;
      den += m * m;
    }
    x(0) = std::log(num / den);
    Eigen::NumericalDiff<detail::LevyResidual, Eigen::Central> nd(fun);
    Eigen::LevenbergMarquardt<Eigen::NumericalDiff<detail::LevyResidual, Eigen::Central>> lm(nd);
    lm.parameters.maxfev = 400;
    lm.parameters.xtol = 1e-12;
    lm.parameters.ftol = 1e-14;
    lm.minimize(x);
    Eigen::VectorXd r;
    fun(x, r);
    const double res = r.cwiseAbs().maxCoeff();
    if (res < best.residual) best = {std::exp(x(0)), x(1), std::exp(x(2)), res};
  }
  return best;
}

/// sup over [lo, hi] of |nu_fit / nu_ref - 1|, sampled on a log grid.
inline double levy_density_error(const LevyFit& fit, const std::function<double(double)>& reference, double lo = 0.1,
                                 double hi = 3.0, std::size_t samples = 400) {
  double worst = 0.0;
  for (std::size_t i = 0; i < samples; ++i) {
    const double l = lo * std::pow(hi / lo, static_cast<double>(i) / static_cast<double>(samples - 1));
    worst = std::max(worst, std::abs(fit.density(l) / reference(l) - 1.0));
  }
  return worst;
}

/// Evaluates C_K(theta f) along a family of lattices with a -> 0 at fixed volume, extrapolates
/// log C and the cumulant functionals to a^s = 0 and classifies the limit.
inline CharacteristicResult continuum_limit(const std::vector<LatticeSpec>& family, const ProfileBuilder& build,
                                            const FieldFunction& f, const ContinuumOptions& opts = {}) {
  if (family.size() < 3) throw ConfigError("continuum_limit needs at least three lattice spacings");
  if (opts.thetas.empty()) throw ConfigError("continuum_limit needs at least one amplitude");
  for (std::size_t i = 0; i < family.size(); ++i) {
    family[i].validate();
    if (i > 0) {
      if (!(family[i].a < family[i - 1].a)) throw ConfigError("lattice spacings must decrease");
      if (family[i].s != family[i - 1].s) throw ConfigError("lattice family mixes dimensions");
      if (std::abs(family[i].volume() / family[0].volume() - 1.0) > 1e-9)
        throw ConfigError("lattice family must keep K a^s fixed");
    }
  }
  CharacteristicResult out;
  out.lattice = family.back();
  out.thetas = opts.thetas;
  const int s = family.front().s;
  const double L = std::pow(family.front().volume(), 1.0 / s);

  std::vector<double> xs;
  for (const auto& spec : family) {
    const auto profile = build(spec);
    const auto sample = f.sample(spec);
    auto r = characteristic_function(spec, profile, sample, opts.thetas);
    SpacingSample sp;
    sp.lattice = spec;
    sp.values = r.values;
    sp.cumulants = r.cumulants;
    for (double v : sample.samples) sp.f2_sum += v * v * spec.cell_volume();
    out.spacings.push_back(sp);
    out.per_site_log_factors = r.per_site_log_factors;
    xs.push_back(spec.cell_volume());
  }

  std::ostringstream diag;
  bool monotone = true;
  std::vector<double> logc(opts.thetas.size());
  for (std::size_t j = 0; j < opts.thetas.size(); ++j) {
    std::vector<double> ys;
    for (const auto& sp : out.spacings) ys.push_back(std::log(std::abs(sp.values[j])));
    const double scale = std::max(1e-300, std::abs(ys.back()));
    for (std::size_t i = 2; i < ys.size(); ++i) {
      const double d1 = ys[i - 1] - ys[i - 2];
      const double d2 = ys[i] - ys[i - 1];
      if (d1 * d2 < 0.0 && std::min(std::abs(d1), std::abs(d2)) > opts.monotone_tol * scale) {
        monotone = false;
        diag << "log C(" << opts.thetas[j] << " f) is not monotone in a: " << ys[i - 2] << ", " << ys[i - 1] << ", "
             << ys[i] << ". ";
      }
    }
    logc[j] = neville_at_zero(xs, ys);
    out.values.push_back(std::exp(cplx(logc[j], 0.0)));
  }
  for (int c = 0; c < 3; ++c) {
    std::vector<double> ys;
    for (const auto& sp : out.spacings) ys.push_back(sp.cumulants[static_cast<std::size_t>(c)]);
    out.cumulants[static_cast<std::size_t>(c)] = neville_at_zero(xs, ys);
  }
  {
    std::vector<double> ys;
    for (const auto& sp : out.spacings)
      ys.push_back(sp.cumulants[0] > 0.0 ? sp.cumulants[1] / (sp.cumulants[0] * sp.cumulants[0]) : 0.0);
    out.kurtosis_functional = neville_at_zero(xs, ys);
  }

  double max_log = 0.0;
  for (double v : logc) max_log = std::max(max_log, std::abs(v));
  if (!monotone) {
    out.limit_class = LimitClass::Undetermined;
  } else if (max_log < opts.degenerate_log) {
    out.limit_class = LimitClass::Degenerate;
    diag << "log C vanishes at every amplitude. ";
  } else if (std::abs(out.kurtosis_functional) < opts.gaussian_kurtosis) {
    out.limit_class = LimitClass::Gaussian;
    std::vector<double> ys;
    for (const auto& sp : out.spacings) ys.push_back(sp.f2_sum);
    const double f2 = neville_at_zero(xs, ys);
    double num = 0.0, den = 0.0;
    for (std::size_t j = 0; j < logc.size(); ++j) {
      const double t2 = opts.thetas[j] * opts.thetas[j] * f2;
      num += t2 * -logc[j];
      den += t2 * t2;
    }
    out.fit_B = num / den;
    double spread = 0.0;
    for (std::size_t j = 0; j < logc.size(); ++j)
      spread = std::max(spread, std::abs(-logc[j] / (opts.thetas[j] * opts.thetas[j] * f2) / *out.fit_B - 1.0));
    diag << "log C / theta^2 varies by " << spread << " relative across amplitudes. ";
  } else {
    std::vector<double> ex;
    for (double v : logc) ex.push_back(-v);
    bool positive = std::all_of(ex.begin(), ex.end(), [](double e) { return e > 0.0; });
    if (positive && opts.thetas.size() >= 3) {
      out.levy_fit = fit_levy_density(opts.thetas, ex, f, s, L, family.front().hbar);
      diag << "Levy fit residual " << out.levy_fit->residual << ". ";
      out.limit_class = out.levy_fit->residual < opts.poisson_residual ? LimitClass::GeneralizedPoisson
                                                                       : LimitClass::Undetermined;
    } else {
      out.limit_class = LimitClass::Undetermined;
      diag << "Levy fit needs at least three amplitudes with positive exponent. ";
    }
  }
  out.diagnostics = diag.str();
  return out;
}

/// Test functions of amplitude at most 1 on the cube [0, L]^s.
inline std::vector<FieldFunction> standard_test_functions(double L) {
  const double pi = std::acos(-1.0);
  return {
      {[L](const std::vector<double>& x) {
         double r2 = 0.0;
         for (double v : x) r2 += (v - 0.5 * L) * (v - 0.5 * L);
         const double w = 0.25 * L;
         return std::exp(-r2 / (2.0 * w * w));
       },
       "gaussian bump"},
      {[](const std::vector<double>&) { return 0.5; }, "constant 0.5"},
      {[L, pi](const std::vector<double>& x) { return std::sin(2.0 * pi * x[0] / L); }, "sine"},
  };
}

}  // namespace eqlab::ultralocal
