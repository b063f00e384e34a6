#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "eqlab/cli/experiment.hpp"
#include "eqlab/rotsym.hpp"

namespace eqlab::cli {

struct ModelRanges {
  double m_lo = 0.5, m_hi = 2.0;
  double zeta_lo = 0.05, zeta_hi = 0.95;
  double v_lo = 0.0, v_hi = 2.0;
  double label_range = 2.0;
};

struct RotsymIdentityParams {
  std::uint64_t seed = 1;
  double hbar = 1.0;
  std::size_t trials = 100;
  std::size_t max_dof = 5;
  ModelRanges ranges;
  double tolerance = 1e-10;

  bool fock_enabled = true;
  std::size_t fock_trials = 2;  // per number of degrees of freedom
  std::size_t fock_max_dof = 2;
  std::vector<std::size_t> fock_cutoffs{16, 32};
  double fock_magnitude = 2.0;
  double fock_tolerance = 1e-4;

  bool shuffle_enabled = true;
  rotsym::RotSymModel shuffle_model{52, 1.0, 0.5, 0.5, 1.0};
  std::size_t shuffle_steps = 1000;
  double shuffle_dt = 1e-3;
  std::vector<std::size_t> sites_a{1, 2}, sites_b{7, 23};
  double shuffle_tolerance = 1e-10;
};

inline std::vector<std::size_t> site_list(ConfigReader& r, const std::string& key, const std::vector<std::size_t>& def) {
  std::vector<double> d(def.begin(), def.end());
  std::vector<std::size_t> out;
  for (double v : r.numbers(key, d)) {
    if (!(v >= 1.0) || v != std::floor(v)) throw ConfigError(r.where(key) + " must list 1-based site indices");
    out.push_back(static_cast<std::size_t>(v));
  }
  return out;
}

inline RotsymIdentityParams parse_rotsym_identity(const json& params, std::uint64_t seed) {
  ConfigReader r(params, "params");
  RotsymIdentityParams p;
  p.seed = seed;
  p.hbar = r.positive("hbar", 1.0);
  p.trials = r.count("random_trials", 100, 1);
  p.max_dof = r.count("max_dof", 5, 1);
  p.tolerance = r.positive("tolerance", 1e-10);
  p.ranges.label_range = r.positive("label_range", 2.0);
  {
    auto f = r.child("fock");
    p.fock_enabled = f.boolean("enabled", true);
    p.fock_trials = f.count("trials_per_dof", 2, 1);
    p.fock_max_dof = f.count("max_dof", 2, 1);
    if (p.fock_max_dof > rotsym::kFockOracleMaxDof) throw ConfigError("params.fock.max_dof must be <= 2");
    p.fock_cutoffs = site_list(f, "cutoffs", {16, 32});
    for (auto c : p.fock_cutoffs)
      if (c < 8 || c > rotsym::kFockOracleMaxCutoff) throw ConfigError("params.fock.cutoffs must lie in [8, 40]");
    std::sort(p.fock_cutoffs.begin(), p.fock_cutoffs.end());
    p.fock_magnitude = f.positive("label_magnitude", 2.0);
    p.fock_tolerance = f.positive("tolerance", 1e-4);
    f.finish();
  }
  {
    auto s = r.child("shuffle");
    p.shuffle_enabled = s.boolean("enabled", true);
    p.shuffle_model.n_dof = s.count("n_dof", 52, 2);
    p.shuffle_model.m = s.positive("m", 1.0);
    p.shuffle_model.zeta = s.number("zeta", 0.5);
    p.shuffle_model.v = s.number("v", 0.5);
    p.shuffle_model.hbar = p.hbar;
    p.shuffle_model.validate();
    p.shuffle_steps = s.count("steps", 1000, 1);
    p.shuffle_dt = s.positive("dt", 1e-3);
    p.sites_a = site_list(s, "sites_a", {1, 2});
    p.sites_b = site_list(s, "sites_b", {7, 23});
    p.shuffle_tolerance = s.positive("tolerance", 1e-10);
    s.finish();
    if (p.sites_a.size() != p.sites_b.size()) throw ConfigError("params.shuffle site lists must have equal length");
    std::vector<std::size_t> all;
    for (auto v : p.sites_a) all.push_back(v);
    for (auto v : p.sites_b) all.push_back(v);
    for (auto v : all)
      if (v > p.shuffle_model.n_dof) throw ConfigError("params.shuffle site index exceeds n_dof");
  }
  r.finish();
  return p;
}

inline rotsym::RotSymModel random_model(std::mt19937_64& rng, std::size_t n, const ModelRanges& g, double hbar) {
  rotsym::RotSymModel m;
  m.n_dof = n;
  m.m = uniform(rng, g.m_lo, g.m_hi);
  m.zeta = uniform(rng, g.zeta_lo, g.zeta_hi);
  m.v = uniform(rng, g.v_lo, g.v_hi);
  m.hbar = hbar;
  return m;
}

inline ExperimentOutput run_rotsym_identity(const RotsymIdentityParams& p) {
  using namespace rotsym;
  ExperimentOutput out;
  out.table = Table({"check", "trial", "n_dof", "m", "zeta", "v", "cutoff", "value", "reference", "relative_error"});
  auto rng = make_rng(p.seed, 0x726f7473);

  double worst = 0.0;
  for (std::size_t t = 0; t < p.trials; ++t) {
    const std::size_t n = 1 + static_cast<std::size_t>(rng() % p.max_dof);
    const auto model = random_model(rng, n, p.ranges, p.hbar);
    PhasePoint x{std::vector<double>(n), std::vector<double>(n)};
    for (std::size_t k = 0; k < n; ++k) {
      x.p[k] = uniform(rng, -p.ranges.label_range, p.ranges.label_range);
      x.q[k] = uniform(rng, -p.ranges.label_range, p.ranges.label_range);
    }
    const double eq = eq_weak_correspondence(model, x);
    const double cl = classical_hamiltonian(model, x);
    const double rel = std::abs(eq - cl) / std::max(1e-300, std::abs(cl));
    worst = std::max(worst, rel);
    out.table.add({"identity", t, n, model.m, model.zeta, model.v, 0, eq, cl, rel});
  }
  out.summary["identity"] = {{"trials", p.trials}, {"max_relative_error", json_number(worst)}};
  out.check_below("coherent-state image equals the classical Hamiltonian", worst, p.tolerance);

  if (p.fock_enabled) {
    json fock = json::array();
    double worst_final = 0.0;
    bool monotone = true;
    std::size_t trial = 0;
    for (std::size_t n = 1; n <= p.fock_max_dof; ++n) {
      for (std::size_t t = 0; t < p.fock_trials; ++t, ++trial) {
        // Moderate couplings keep the displaced state inside the truncated Fock space.
        ModelRanges g;
        g.m_lo = 0.8, g.m_hi = 1.2, g.zeta_lo = 0.2, g.zeta_hi = 0.6, g.v_lo = 0.0, g.v_hi = 1.0;
        const auto model = random_model(rng, n, g, p.hbar);
        PhasePoint x{std::vector<double>(n), std::vector<double>(n)};
        std::vector<double> dir(2 * n);
        double norm = 0.0;
        for (double& d : dir) {
          d = uniform(rng, -1.0, 1.0);
          norm += d * d;
        }
        const double scale = p.fock_magnitude * std::sqrt(p.hbar) / std::sqrt(norm);
        for (std::size_t k = 0; k < n; ++k) {
          x.p[k] = scale * dir[2 * k];
          x.q[k] = scale * dir[2 * k + 1];
        }
        const double eq = eq_weak_correspondence(model, x);
        std::vector<double> errs;
        for (std::size_t c : p.fock_cutoffs) {
          const double v = fock_oracle(model, x, c);
          const double rel = std::abs(v - eq) / std::abs(eq);
          errs.push_back(rel);
          out.table.add({"fock", trial, n, model.m, model.zeta, model.v, c, eq, v, rel});
        }
        for (std::size_t i = 1; i < errs.size(); ++i)
          if (!(errs[i] < errs[i - 1] || errs[i] <= 1e-12)) monotone = false;
        worst_final = std::max(worst_final, errs.back());
        fock.push_back({{"n_dof", n}, {"relative_errors", number_list(errs)}});
      }
    }
    out.summary["fock_oracle"] = {{"cutoffs", p.fock_cutoffs}, {"trials", fock}};
    out.check_below("Fock-space oracle agrees at the largest cutoff", worst_final, p.fock_tolerance);
    out.check("Fock-space oracle error decreases with the cutoff", monotone,
              "errors shrink from each cutoff to the next (or sit below 1e-12)");
  }

  if (p.shuffle_enabled) {
    const auto& model = p.shuffle_model;
    const std::size_t n = model.n_dof;
    std::vector<std::size_t> sigma(n);
    for (std::size_t k = 0; k < n; ++k) sigma[k] = k;
    for (std::size_t i = 0; i < p.sites_a.size(); ++i) std::swap(sigma[p.sites_a[i] - 1], sigma[p.sites_b[i] - 1]);
    PhasePoint a{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
    for (auto s : p.sites_a) {
      a.p[s - 1] = uniform(rng, -1.0, 1.0);
      a.q[s - 1] = uniform(rng, -1.0, 1.0);
    }
    const PhasePoint b = permute(a, sigma);
    const auto ta = classical_flow(model, a, p.shuffle_dt, p.shuffle_steps, 1);
    const auto tb = classical_flow(model, b, p.shuffle_dt, p.shuffle_steps, 1);
    double dev = 0.0, energy_dev = 0.0;
    for (std::size_t i = 0; i < ta.points.size(); ++i) {
      const PhasePoint moved = permute(ta.points[i], sigma);
      for (std::size_t k = 0; k < n; ++k)
        dev = std::max({dev, std::abs(moved.p[k] - tb.points[i].p[k]), std::abs(moved.q[k] - tb.points[i].q[k])});
      energy_dev = std::max(energy_dev, std::abs(ta.energy[i] - tb.energy[i]));
      if (i % 100 == 0 || i + 1 == ta.points.size())
        out.table.add({"shuffle", i, n, model.m, model.zeta, model.v, 0, ta.energy[i], tb.energy[i],
                       std::abs(ta.energy[i] - tb.energy[i]) / std::max(1e-300, std::abs(tb.energy[i]))});
    }
    out.summary["shuffle"] = {{"n_dof", n},
                              {"steps", p.shuffle_steps},
                              {"dt", json_number(p.shuffle_dt)},
                              {"sites_a", p.sites_a},
                              {"sites_b", p.sites_b},
                              {"max_trajectory_deviation", json_number(dev)},
                              {"max_energy_deviation", json_number(energy_dev)}};
    out.check_below("relabelled initial data gives the relabelled trajectory", dev, p.shuffle_tolerance);
    out.check_below("relabelled trajectories carry equal energy", energy_dev, p.shuffle_tolerance);
  }
  return out;
}

inline PreparedRun prepare_rotsym_identity(const json& params, std::uint64_t seed) {
  auto p = parse_rotsym_identity(params, seed);
  return [p] { return run_rotsym_identity(p); };
}

// ---------------------------------------------------------------------------------------------
// rotsym-compare-n3: low CQ spectrum of the naive canonical promotion for N <= 3.

struct CompareParams {
  rotsym::RotSymModel model{3, 1.0, 0.5, 1.0, 1.0};
  std::size_t cutoff = 18;
  std::size_t n_levels = 20;
  double tolerance = 1e-6;
};

inline CompareParams parse_compare(const json& params) {
  ConfigReader r(params, "params");
  CompareParams p;
  p.model.n_dof = r.count("n_dof", 3, 1);
  if (p.model.n_dof > 3) throw ConfigError("params.n_dof must be <= 3");
  p.model.m = r.positive("m", 1.0);
  p.model.zeta = r.number("zeta", 0.5);
  p.model.v = r.number("v", 1.0);
  p.model.hbar = r.positive("hbar", 1.0);
  p.model.validate();
  p.cutoff = r.count("cutoff", 18, 8);
  if (p.cutoff > 24) throw ConfigError("params.cutoff must be in [8, 24]");
  p.n_levels = r.count("n_levels", 20, 1);
  p.tolerance = r.positive("tolerance", 1e-6);
  r.finish();
  return p;
}

inline ExperimentOutput run_compare(const CompareParams& p) {
  using namespace rotsym;
  ExperimentOutput out;
  const auto cmp = compare_cq_spectrum(p.model, p.cutoff, p.n_levels);
  // Free levels hbar m0 (k + N/2), each repeated C(k + N - 1, N - 1) times.
  std::vector<double> free_levels;
  const double m0 = std::sqrt(p.model.m0_sq());
  for (std::size_t k = 0; free_levels.size() < cmp.levels.size(); ++k) {
    std::size_t mult = 1;
    for (std::size_t j = 1; j < p.model.n_dof; ++j) mult = mult * (k + j) / j;
    for (std::size_t i = 0; i < mult && free_levels.size() < cmp.levels.size(); ++i)
      free_levels.push_back(p.model.hbar * m0 * (static_cast<double>(k) + 0.5 * static_cast<double>(p.model.n_dof)));
  }
  out.table = Table({"level", "cq_energy", "free_energy"});
  for (std::size_t k = 0; k < cmp.levels.size(); ++k) out.table.add({k, cmp.levels[k], free_levels[k]});
  json clusters = json::array();
  for (const auto& c : cmp.clusters) clusters.push_back({{"energy", json_number(c.energy)}, {"degeneracy", c.degeneracy}});
  out.summary["model"] = {{"n_dof", p.model.n_dof},     {"m", json_number(p.model.m)},
                          {"zeta", json_number(p.model.zeta)}, {"v", json_number(p.model.v)},
                          {"hbar", json_number(p.model.hbar)}, {"m0", json_number(std::sqrt(p.model.m0_sq()))},
                          {"lambda0", json_number(p.model.lambda0())}};
  out.summary["cutoff"] = cmp.cutoff;
  out.summary["levels"] = number_list(cmp.levels);
  out.summary["free_shells"] = number_list(cmp.free_reference);
  out.summary["clusters"] = clusters;
  out.summary["discretization_error"] = json_number(cmp.discretization_error);
  // The weak-correspondence image that the EQ construction assigns to the same model at the origin
  // of phase space, for orientation next to the CQ ground level.
  out.summary["eq_image_at_origin"] =
      json_number(eq_weak_correspondence(p.model, {std::vector<double>(p.model.n_dof, 0.0), std::vector<double>(p.model.n_dof, 0.0)}));

  out.check_below("CQ levels are stable against the Fock cutoff", cmp.discretization_error, p.tolerance);
  bool above = true, sorted = true;
  for (std::size_t k = 0; k < cmp.levels.size(); ++k) {
    if (cmp.levels[k] < free_levels[k] - 1e-9 * std::max(1.0, free_levels[k])) above = false;
    if (k > 0 && cmp.levels[k] < cmp.levels[k - 1]) sorted = false;
  }
  out.check("CQ levels lie above the free levels (positive quartic term)", above, "level-by-level comparison");
  out.check("CQ levels are ascending", sorted, "");
  if (p.model.n_dof == 3) {
    // SO(3) multiplets have 2l + 1 states; the last cluster may be cut by n_levels.
    bool odd = true;
    for (std::size_t i = 0; i + 1 < cmp.clusters.size(); ++i)
      if (cmp.clusters[i].degeneracy % 2 == 0) odd = false;
    out.check("complete level clusters have odd degeneracy", odd, "rotational multiplets of dimension 2l + 1");
  }
  return out;
}

inline PreparedRun prepare_compare(const json& params, std::uint64_t) {
  auto p = parse_compare(params);
  return [p] { return run_compare(p); };
}

}  // namespace eqlab::cli
