#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "eqlab/cli/experiment.hpp"
#include "eqlab/geometry.hpp"
#include "eqlab/hilbert.hpp"

namespace eqlab::cli {

// ---------------------------------------------------------------------------------------------
// fs-metric: Fubini-Study metric and curvature of the canonical or affine coherent families.

struct FsMetricParams {
  bool affine = false;
  double hbar = 1.0;
  std::vector<double> family_values;  // omega (canonical) or beta~ (affine)
  std::vector<std::pair<double, double>> labels;
  std::size_t basis_size = 0;
  geometry::MetricOptions metric;
  double metric_tol = 0.0;
  double curvature_tol = 0.0;
};

inline FsMetricParams parse_fs_metric(const json& params, std::uint64_t seed) {
  ConfigReader r(params, "params");
  FsMetricParams p;
  p.affine = r.choice("variant", {"canonical", "affine"}, "canonical") == "affine";
  p.hbar = r.positive("hbar", 1.0);
  p.family_values = p.affine ? r.numbers("beta_tilde", {1.0, 2.0}) : r.numbers("omega", {0.5, 1.0, 2.0});
  for (double v : p.family_values)
    if (!(v > 0.0)) throw ConfigError(std::string("params.") + (p.affine ? "beta_tilde" : "omega") + " must be > 0");
  // Both family parameters are accepted so one config can flip the variant; the unused one is ignored.
  if (p.affine) r.numbers("omega", {1.0}); else r.numbers("beta_tilde", {1.0});
  p.basis_size = r.count("basis_size", p.affine ? 2000 : 128, 16);
  p.metric.fd_step = r.positive("fd_step", 1e-3);
  p.metric.curvature_step = r.positive("curvature_step", 1e-2);
  p.metric_tol = r.positive("metric_tolerance", p.affine ? 1e-4 : 1e-6);
  p.curvature_tol = r.positive("curvature_tolerance", p.affine ? 1e-3 : 1e-4);
  const std::size_t n_random = r.count("random_labels", p.affine ? 3 : 5, 1);
  if (auto listed = r.pairs("labels")) {
    p.labels = *listed;
  } else {
    auto rng = make_rng(seed, 0x6d657472);
    if (p.affine) {
      // One label per dilation q in the list, with a random momentum.
      for (double q : r.numbers("q_values", {0.5, 1.0, 2.0})) p.labels.emplace_back(uniform(rng, -1.5, 1.5), q);
    } else {
      for (std::size_t i = 0; i < n_random; ++i) {
        const double pp = uniform(rng, -1.5, 1.5);
        p.labels.emplace_back(pp, uniform(rng, -1.5, 1.5));
      }
    }
  }
  if (!p.affine) r.numbers("q_values", {1.0});
  for (const auto& l : p.labels)
    if (p.affine && !(l.second > 0.0)) throw DomainError("affine labels need q > 0");
  r.finish();
  return p;
}

inline ExperimentOutput run_fs_metric(const FsMetricParams& p) {
  using namespace geometry;
  ExperimentOutput out;
  out.table = Table({"variant", "family_parameter", "p", "q", "g_pp", "g_pq", "g_qq", "scalar_curvature",
                     "expected_g_pp", "expected_g_pq", "expected_g_qq", "expected_curvature"});
  json rows = json::array();
  double worst_metric = 0.0, worst_curv = 0.0;
  for (double v : p.family_values) {
    hilbert::QuantizationParams qp;
    qp.hbar = p.hbar;
    std::vector<MetricSample> samples;
    std::vector<std::array<double, 4>> expected;  // g_pp, g_pq, g_qq, R
    if (p.affine) {
      qp.beta_tilde = v;
      const auto fam = AffineFamily::build(qp, hilbert::default_affine_basis(qp, p.basis_size));
      for (const auto& [lp, lq] : p.labels) {
        samples.push_back(fubini_study_metric({lp, lq, CoherentVariant::Affine}, fam, p.metric));
        expected.push_back({lq * lq / v, 0.0, v / (lq * lq), -2.0 / v});
      }
    } else {
      qp.omega = v;
      const auto fam = CanonicalFamily::build(qp, hilbert::BasisSpec::fock(p.basis_size));
      for (const auto& [lp, lq] : p.labels) {
        samples.push_back(fubini_study_metric({lp, lq, CoherentVariant::Canonical}, fam, p.metric));
        expected.push_back({1.0 / v, 0.0, v, 0.0});
      }
    }
    for (std::size_t i = 0; i < samples.size(); ++i) {
      const auto& s = samples[i];
      const auto& e = expected[i];
      // Affine components scale like q^2 and q^-2; compare relative to the expected size.
      const double dm = std::max({std::abs(s.g_pp - e[0]) / std::max(1.0, e[0]), std::abs(s.g_pq - e[1]),
                                  std::abs(s.g_qq - e[2]) / std::max(1.0, e[2])});
      const double dr = std::abs(s.scalar_curvature - e[3]);
      worst_metric = std::max(worst_metric, dm);
      worst_curv = std::max(worst_curv, dr);
      out.table.add({p.affine ? "affine" : "canonical", v, s.label.p, s.label.q, s.g_pp, s.g_pq, s.g_qq,
                     s.scalar_curvature, e[0], e[1], e[2], e[3]});
      rows.push_back({{"family_parameter", json_number(v)},
                      {"p", json_number(s.label.p)},
                      {"q", json_number(s.label.q)},
                      {"metric_error", json_number(dm)},
                      {"curvature_error", json_number(dr)}});
    }
  }
  out.summary["variant"] = p.affine ? "affine" : "canonical";
  out.summary["hbar"] = json_number(p.hbar);
  out.summary["samples"] = rows;
  out.summary["max_metric_error"] = json_number(worst_metric);
  out.summary["max_curvature_error"] = json_number(worst_curv);
  out.check_below("metric components match the closed form", worst_metric, p.metric_tol);
  out.check_below("scalar curvature matches the closed form", worst_curv, p.curvature_tol);
  return out;
}

inline PreparedRun prepare_fs_metric(const json& params, std::uint64_t seed) {
  auto p = parse_fs_metric(params, seed);
  return [p] { return run_fs_metric(p); };
}

// ---------------------------------------------------------------------------------------------
// weak-correspondence: <p,q|H|p,q> against <0|H(P + p, Q + q)|0> and the hbar -> 0 limit.

struct WeakParams {
  std::vector<double> hbars;
  double omega = 1.0;
  double quartic = 1.0;
  std::vector<std::string> hamiltonians;
  std::vector<std::pair<double, double>> labels;
  std::size_t basis_size = 128;
  double tolerance = 1e-8;
  double linearity = 0.05;
};

inline WeakParams parse_weak(const json& params, std::uint64_t seed) {
  ConfigReader r(params, "params");
  WeakParams p;
  const double hbar = r.positive("hbar", 1.0);
  p.hbars = r.numbers("hbar_scan", {1.0, 0.5, 0.25, 0.125}, true);
  if (p.hbars.empty()) p.hbars = {hbar};
  else if (r.has("hbar")) p.hbars.insert(p.hbars.begin(), hbar);
  std::sort(p.hbars.begin(), p.hbars.end(), std::greater<>());
  p.hbars.erase(std::unique(p.hbars.begin(), p.hbars.end()), p.hbars.end());
  for (double h : p.hbars)
    if (!(h > 0.0)) throw ConfigError("params.hbar_scan values must be > 0");
  p.omega = r.positive("omega", 1.0);
  p.quartic = r.number("quartic_coefficient", 1.0);
  p.hamiltonians = r.strings("hamiltonians", {"harmonic", "quartic"});
  if (p.hamiltonians.empty()) throw ConfigError("params.hamiltonians must not be empty");
  for (const auto& h : p.hamiltonians)
    if (h != "harmonic" && h != "quartic") throw ConfigError("params.hamiltonians entries must be harmonic or quartic");
  p.basis_size = r.count("basis_size", 128, 32);
  p.tolerance = r.positive("tolerance", 1e-8);
  p.linearity = r.positive("linearity_tolerance", 0.05);
  const double range = r.positive("label_range", 2.0);
  const std::size_t n = r.count("random_labels", 50, 1);
  if (auto listed = r.pairs("labels")) {
    p.labels = *listed;
  } else {
    auto rng = make_rng(seed, 0x7765616b);
    for (std::size_t i = 0; i < n; ++i) {
      const double pp = uniform(rng, -range, range);
      p.labels.emplace_back(pp, uniform(rng, -range, range));
    }
  }
  r.finish();
  return p;
}

inline geometry::PhasePolynomial weak_hamiltonian(const WeakParams& p, const std::string& name) {
  return name == "harmonic" ? geometry::PhasePolynomial::harmonic(p.omega) : geometry::PhasePolynomial::quartic(p.quartic);
}

inline ExperimentOutput run_weak(const WeakParams& p) {
  using namespace geometry;
  ExperimentOutput out;
  out.table = Table({"hbar", "hamiltonian", "p", "q", "displaced", "shifted", "classical", "displaced_minus_shifted",
                     "quantum_correction"});
  double worst = 0.0;
  json per_h = json::object();
  std::map<std::string, std::vector<double>> mean_corr;
  for (double hbar : p.hbars) {
    hilbert::QuantizationParams qp;
    qp.hbar = hbar;
    qp.omega = p.omega;
    const auto fam = CanonicalFamily::build(qp, hilbert::BasisSpec::fock(p.basis_size));
    for (const auto& name : p.hamiltonians) {
      const auto poly = weak_hamiltonian(p, name);
      const auto H = poly.quantize(fam.momentum(), fam.position());
      double sum = 0.0;
      for (const auto& [lp, lq] : p.labels) {
        const double displaced = weak_correspondence(H, {lp, lq, CoherentVariant::Canonical}, fam);
        const double shifted = shifted_operator_expectation(poly, fam, lp, lq);
        const double classical = poly.classical(lp, lq);
        const double scale = std::max(1.0, std::abs(displaced));
        worst = std::max(worst, std::abs(displaced - shifted) / scale);
        sum += displaced - classical;
        out.table.add({hbar, name, lp, lq, displaced, shifted, classical, displaced - shifted, displaced - classical});
      }
      mean_corr[name].push_back(sum / static_cast<double>(p.labels.size()));
    }
  }
  for (const auto& name : p.hamiltonians) {
    json h;
    h["hbar"] = number_list(p.hbars);
    h["mean_quantum_correction"] = number_list(mean_corr[name]);
    if (p.hbars.size() >= 2) {
      const auto fit = fit_line(p.hbars, mean_corr[name]);
      double sup = 0.0;
      for (double c : mean_corr[name]) sup = std::max(sup, std::abs(c));
      const double rel = sup > 0.0 ? fit.max_residual / sup : 0.0;
      h["slope"] = json_number(fit.slope);
      h["intercept"] = json_number(fit.intercept);
      h["relative_fit_residual"] = json_number(rel);
      out.check_below("quantum correction of " + name + " is linear in hbar", rel, p.linearity);
      // The correction must vanish with hbar: the intercept is small next to the hbar = max value.
      out.check_below("quantum correction of " + name + " vanishes as hbar -> 0",
                      std::abs(fit.intercept) / std::max(sup, 1e-300), p.linearity);
    }
    per_h[name] = h;
  }
  out.summary["labels"] = p.labels.size();
  out.summary["omega"] = json_number(p.omega);
  out.summary["max_relative_displaced_minus_shifted"] = json_number(worst);
  out.summary["hamiltonians"] = per_h;
  out.check_below("displaced-state and shifted-operator expectations agree", worst, p.tolerance);
  return out;
}

inline PreparedRun prepare_weak(const json& params, std::uint64_t seed) {
  auto p = parse_weak(params, seed);
  return [p] { return run_weak(p); };
}

}  // namespace eqlab::cli
