#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "eqlab/cli/experiment.hpp"
#include "eqlab/hilbert.hpp"
#include "eqlab/ultralocal.hpp"

namespace eqlab::cli {

/// Lattice block shared by the ultralocal experiments. The volume V = K a^s must hold an integer
/// number of cells per side.
struct LatticeBlock {
  ultralocal::LatticeSpec spec;
  double volume = 1.0;

  /// The same physics on another spacing at equal volume.
  ultralocal::LatticeSpec at(double a) const {
    auto s = spec;
    s.a = a;
    const double L = std::pow(volume, 1.0 / s.s);
    const double side = L / a;
    const auto n = static_cast<std::size_t>(std::llround(side));
    if (n == 0 || std::abs(side - static_cast<double>(n)) > 1e-6 * side)
      throw ConfigError("lattice spacing " + format_double(a) + " does not divide the box side " + format_double(L));
    s.K = 1;
    for (int d = 0; d < s.s; ++d) s.K *= n;
    s.validate();
    return s;
  }
};

inline LatticeBlock parse_lattice(ConfigReader& parent, const std::string& default_scheme, double default_lambda0) {
  auto r = parent.child("lattice");
  LatticeBlock l;
  l.spec.s = static_cast<int>(r.integer("s", 1));
  if (l.spec.s < 1 || l.spec.s > 3) throw ConfigError(r.where("s") + " must be 1, 2 or 3");
  l.spec.a = r.number("a");
  if (!(l.spec.a > 0.0)) throw ConfigError(r.where("a") + " must be > 0");
  l.spec.b = r.positive("b", 1.0);
  l.spec.m0 = r.positive("m0", 1.0);
  l.spec.lambda0 = r.number("lambda0", default_lambda0);
  if (l.spec.lambda0 < 0.0) throw ConfigError(r.where("lambda0") + " must be >= 0");
  l.spec.hbar = r.positive("hbar", 1.0);
  l.spec.scheme = r.choice("scheme", {"bare", "renormalized"}, default_scheme) == "bare"
                      ? ultralocal::LatticeScheme::Bare
                      : ultralocal::LatticeScheme::Renormalized;
  l.volume = r.positive("volume", 1.0);
  r.finish();
  l.spec = l.at(l.spec.a);
  return l;
}

inline std::vector<double> spacing_list(ConfigReader& r, const std::string& key, const std::vector<double>& def) {
  auto v = r.numbers(key, def);
  for (double a : v)
    if (!(a > 0.0)) throw ConfigError(r.where(key) + " must be positive");
  return v;
}

inline std::vector<ultralocal::FieldFunction> select_test_functions(ConfigReader& r, double L) {
  const auto all = ultralocal::standard_test_functions(L);
  std::vector<std::string> names;
  for (const auto& f : all) names.push_back(f.description);
  const auto wanted = r.strings("test_functions", names);
  if (wanted.empty()) throw ConfigError("params.test_functions must not be empty");
  std::vector<ultralocal::FieldFunction> out;
  for (const auto& w : wanted) {
    bool found = false;
    for (const auto& f : all)
      if (f.description == w) {
        out.push_back(f);
        found = true;
      }
    if (!found) throw ConfigError("unknown test function \"" + w + "\" (known: gaussian bump, constant 0.5, sine)");
  }
  return out;
}

inline json lattice_json(const ultralocal::LatticeSpec& s) {
  return {{"s", s.s},
          {"a", json_number(s.a)},
          {"K", s.K},
          {"b", json_number(s.b)},
          {"m0", json_number(s.m0)},
          {"lambda0", json_number(s.lambda0)},
          {"hbar", json_number(s.hbar)},
          {"scheme", ultralocal::to_string(s.scheme)}};
}

inline void add_characteristic_rows(Table& t, const std::string& fname, const ultralocal::CharacteristicResult& r) {
  for (const auto& sp : r.spacings)
    for (std::size_t j = 0; j < r.thetas.size(); ++j)
      t.add({sp.lattice.a, sp.lattice.K, fname, r.thetas[j], sp.values[j].real(), sp.values[j].imag(), sp.cumulants[0],
             sp.cumulants[1], sp.cumulants[2]});
  // The extrapolated a -> 0 values, reported at a = 0.
  for (std::size_t j = 0; j < r.thetas.size(); ++j)
    t.add({0.0, 0, fname, r.thetas[j], r.values[j].real(), r.values[j].imag(), r.cumulants[0], r.cumulants[1],
           r.cumulants[2]});
}

/// Largest |C| - 1 over every value a continuum run produced, per spacing and extrapolated.
inline double modulus_excess(const ultralocal::CharacteristicResult& r) {
  double worst = -1.0;
  for (const auto& sp : r.spacings)
    for (const auto& c : sp.values) worst = std::max(worst, std::abs(c) - 1.0);
  for (const auto& c : r.values) worst = std::max(worst, std::abs(c) - 1.0);
  return worst;
}

/// log |C(theta f)| on the first (coarsest) lattice of a continuum run, one entry per theta.
inline json base_log_values(const ultralocal::CharacteristicResult& r) {
  std::vector<double> v;
  for (const auto& c : r.spacings.front().values) v.push_back(std::log(std::abs(c)));
  return number_list(v);
}

inline Table characteristic_table() {
  return Table({"a", "K", "test_function", "theta", "re_C", "im_C", "kappa2", "kappa4", "kappa6"});
}

inline std::array<ultralocal::TestFunction, 3> axiom_triple(const ultralocal::LatticeSpec& spec, double L) {
  const auto fs = ultralocal::standard_test_functions(L);
  return {fs[0].sample(spec), fs[1].sample(spec), fs[2].sample(spec)};
}

inline json axiom_json(const ultralocal::AxiomReport& a) {
  return {{"c_zero_defect", json_number(a.c_zero_defect)},
          {"max_modulus", json_number(a.max_modulus)},
          {"conjugate_defect", json_number(a.conjugate_defect)},
          {"bochner_min_eigenvalue", json_number(a.bochner_min_eigenvalue)},
          {"ok", a.ok()}};
}

// ---------------------------------------------------------------------------------------------
// ultralocal-cq

struct CqParams {
  LatticeBlock lattice;
  ultralocal::CqSiteOptions site;
  std::vector<double> continuum_spacings;
  std::vector<double> moment_spacings;
  ultralocal::ContinuumOptions continuum;
  std::vector<ultralocal::FieldFunction> functions;
  double exponent_tol = 0.05;
  double B_tol = 0.02;
};

inline CqParams parse_cq(const json& params) {
  ConfigReader r(params, "params");
  CqParams p;
  p.lattice = parse_lattice(r, "renormalized", 1.0);
  const double a = p.lattice.spec.a;
  {
    auto s = r.child("site");
    p.site.points = s.count("points", 1601, 101);
    if (p.site.points % 2 == 0) throw ConfigError("params.site.points must be odd");
    p.site.width_factor = s.positive("width_factor", 9.0);
    p.site.n_levels = s.count("n_levels", 6, 1);
    s.finish();
  }
  {
    auto c = r.child("continuum");
    p.continuum_spacings = spacing_list(c, "spacings", {a, a / 2, a / 4});
    p.continuum.thetas = c.numbers("thetas", p.continuum.thetas);
    p.continuum.gaussian_kurtosis = c.positive("gaussian_kurtosis", p.continuum.gaussian_kurtosis);
    c.finish();
  }
  {
    auto m = r.child("moments");
    p.moment_spacings = spacing_list(m, "spacings", {2 * a, a, a / 2});
    if (p.moment_spacings.size() < 2) throw ConfigError("params.moments.spacings needs at least two values");
    m.finish();
  }
  p.exponent_tol = r.positive("exponent_tolerance", 0.05);
  p.B_tol = r.positive("B_tolerance", 0.02);
  p.functions = select_test_functions(r, std::pow(p.lattice.volume, 1.0 / p.lattice.spec.s));
  r.finish();
  for (double s : p.continuum_spacings) p.lattice.at(s);
  for (double s : p.moment_spacings) {
    auto spec = p.lattice.spec;
    spec.a = s;
    spec.validate();
  }
  return p;
}

inline ExperimentOutput run_cq(const CqParams& p) {
  using namespace ultralocal;
  ExperimentOutput out;
  out.table = characteristic_table();
  const auto& base = p.lattice.spec;
  const int s = base.s;
  const double L = std::pow(p.lattice.volume, 1.0 / s);
  const auto opts = p.site;
  const auto site = cq_site_ground(base, opts);
  out.summary["lattice"] = lattice_json(base);
  out.summary["site_spectrum"] = hilbert::to_json(site.spectrum);

  // Per-site moment scaling: E[(xi/hbar)^2] ~ a^s and E[(xi/hbar)^4] ~ a^(2s).
  std::vector<double> as, m2, m4;
  for (double a : p.moment_spacings) {
    auto spec = base;
    spec.a = a;
    const auto prof = cq_site_ground(spec, opts).profile;
    as.push_back(a);
    m2.push_back(prof.moments[0]);
    m4.push_back(prof.moments[1]);
  }
  const double e2 = power_law_exponent(as, m2), e4 = power_law_exponent(as, m4);
  out.summary["moment_scaling"] = {{"spacings", number_list(as)},
                                   {"m2", number_list(m2)},
                                   {"m4", number_list(m4)},
                                   {"exponent_m2", json_number(e2)},
                                   {"exponent_m4", json_number(e4)}};
  out.check_close("second moment scales as a^s", e2, s, p.exponent_tol * s);
  out.check_close("fourth moment scales as a^(2s)", e4, 2.0 * s, p.exponent_tol * 2.0 * s);

  std::vector<LatticeSpec> family;
  for (double a : p.continuum_spacings) family.push_back(p.lattice.at(a));
  const ProfileBuilder build = [opts](const LatticeSpec& spec) { return cq_site_ground(spec, opts).profile; };
  json fns = json::object();
  const bool free = base.lambda0 == 0.0;
  const double B_expected = 1.0 / (4.0 * base.m0 * base.hbar);
  for (const auto& f : p.functions) {
    const auto r = continuum_limit(family, build, f, p.continuum);
    add_characteristic_rows(out.table, f.description, r);
    json j;
    j["limit_class"] = to_string(r.limit_class);
    j["kurtosis_functional"] = json_number(r.kurtosis_functional);
    j["thetas"] = number_list(r.thetas);
    j["log_C_at_base"] = base_log_values(r);
    j["fit_B"] = r.fit_B ? json_number(*r.fit_B) : json(nullptr);
    j["diagnostics"] = r.diagnostics;
    out.check_below("|C| <= 1 for every value of " + f.description, modulus_excess(r), 1e-12);
    out.check("continuum limit of " + f.description + " is Gaussian", r.limit_class == LimitClass::Gaussian,
              std::string("class ") + to_string(r.limit_class) + "; " + r.diagnostics);
    if (free && r.fit_B) out.check_close("Gaussian width of " + f.description, *r.fit_B, B_expected, p.B_tol * B_expected);
    if (!free) {
      // The excess kurtosis of the smeared field decays like a^s.
      std::vector<double> xs, ks;
      for (const auto& sp : r.spacings) {
        xs.push_back(sp.lattice.a);
        ks.push_back(sp.cumulants[1] / (sp.cumulants[0] * sp.cumulants[0]));
      }
      if (std::all_of(ks.begin(), ks.end(), [](double k) { return k != 0.0; })) {
        const double ek = power_law_exponent(xs, ks);
        j["kurtosis_exponent"] = json_number(ek);
        out.check_close("quartic cumulant of " + f.description + " decays as a^s", ek, s, p.exponent_tol * s);
      }
    }
    fns[f.description] = j;
  }
  if (free) out.summary["expected_B"] = json_number(B_expected);
  out.summary["test_functions"] = fns;
  const auto ax = check_axioms(base, site.profile, axiom_triple(base, L));
  out.summary["axioms"] = axiom_json(ax);
  out.check("characteristic functional axioms hold", ax.ok(), "C(0) = 1, |C| <= 1, C(-f) = conj C(f), Bochner");
  return out;
}

inline PreparedRun prepare_cq(const json& params, std::uint64_t) {
  auto p = parse_cq(params);
  return [p] { return run_cq(p); };
}

// ---------------------------------------------------------------------------------------------
// ultralocal-eq

struct EqParams {
  LatticeBlock lattice;
  ultralocal::EqSiteOptions site;
  std::vector<double> epsilons;
  double poisson_tol = 1e-3;
  std::vector<double> factor_thetas{0.5, 1.0, 2.0, 4.0};
  double factor_tol = 0.03;
  std::vector<double> continuum_spacings;
  ultralocal::ContinuumOptions continuum;
  double levy_lo = 0.1, levy_hi = 3.0, levy_tol = 0.03;
  double normalization_tol = 1e-6;
  double z_tol = 0.02;
  std::vector<ultralocal::FieldFunction> functions;
};

inline EqParams parse_eq(const json& params) {
  ConfigReader r(params, "params");
  EqParams p;
  p.lattice = parse_lattice(r, "renormalized", 0.0);
  const auto& base = p.lattice.spec;
  {
    auto s = r.child("site");
    p.site.points = s.count("points", 2000, 200);
    p.site.decades_below = s.positive("decades_below", 3.5);
    p.site.width_factor = s.positive("width_factor", 8.0);
    p.site.n_levels = s.count("n_levels", 6, 1);
    p.site.branch = s.choice("branch", {"singular", "regular"}, "singular") == "singular" ? ultralocal::EqBranch::Singular
                                                                                          : ultralocal::EqBranch::Regular;
    s.finish();
  }
  {
    auto c = r.child("poisson_check");
    const double e = base.epsilon();
    p.epsilons = c.numbers("epsilons", {e, e / 10});
    for (double v : p.epsilons)
      if (!(v > 0.0 && v < 1.0)) throw ConfigError("params.poisson_check.epsilons must lie in (0, 1)");
    p.poisson_tol = c.positive("tolerance", 1e-3);
    p.factor_thetas = c.numbers("site_thetas", p.factor_thetas);
    p.factor_tol = c.positive("site_tolerance", 0.03);
    c.finish();
  }
  {
    auto c = r.child("continuum");
    p.continuum_spacings = spacing_list(c, "spacings", {base.a, base.a / 2, base.a / 4});
    p.continuum.thetas = c.numbers("thetas", {0.25, 0.5, 1.0, 2.0, 4.0, 8.0});
    c.finish();
  }
  {
    auto l = r.child("levy");
    const auto range = l.numbers("lambda_range", {0.1, 3.0});
    if (range.size() != 2 || !(range[0] > 0.0 && range[1] > range[0]))
      throw ConfigError("params.levy.lambda_range must be [lo, hi] with 0 < lo < hi");
    p.levy_lo = range[0];
    p.levy_hi = range[1];
    p.levy_tol = l.positive("tolerance", 0.03);
    l.finish();
  }
  p.normalization_tol = r.positive("normalization_tolerance", 1e-6);
  p.z_tol = r.positive("z_tolerance", 0.02);
  p.functions = select_test_functions(r, std::pow(p.lattice.volume, 1.0 / base.s));
  r.finish();
  for (double a : p.continuum_spacings) p.lattice.at(a);
  for (double e : p.epsilons) p.lattice.at(std::pow(e / base.b, 1.0 / base.s));
  return p;
}

inline ExperimentOutput run_eq(const EqParams& p) {
  using namespace ultralocal;
  ExperimentOutput out;
  out.table = characteristic_table();
  const auto& base = p.lattice.spec;
  const int s = base.s;
  const double L = std::pow(p.lattice.volume, 1.0 / s);
  const bool free = base.lambda0 == 0.0 && base.scheme == LatticeScheme::Renormalized;
  const double kappa = base.b * base.m0 / base.hbar;
  const auto opts = p.site;
  out.summary["lattice"] = lattice_json(base);

  // Per-site checks and the product formula against the closed generalized-Poisson form.
  json per_eps = json::array();
  std::function<double(double)> z_ref;
  for (double eps : p.epsilons) {
    const auto spec = p.lattice.at(std::pow(eps / base.b, 1.0 / s));
    EqSiteDetails details;
    const auto site = eq_site_ground(spec, opts, &details);
    const auto& prof = site.profile;
    const std::function<double(double)> z =
        free ? std::function<double(double)>([kappa](double x) { return kappa * x * x; }) : prof.evaluator;
    if (!z_ref) z_ref = z;
    json j;
    j["epsilon"] = json_number(eps);
    j["lattice"] = lattice_json(spec);
    j["site_spectrum"] = hilbert::to_json(site.spectrum);
    j["normalization_check"] = json_number(details.normalization_check);
    out.check_close("site normalization at eps = " + format_double(eps), details.normalization_check, 1.0,
                    p.normalization_tol);
    // Quadratic coefficient of the regular factor on the Levy window.
    double num = 0.0, den = 0.0;
    for (int i = 0; i <= 60; ++i) {
      const double l = p.levy_lo * std::pow(p.levy_hi / p.levy_lo, i / 60.0);
      num += prof.evaluator(l) * l * l;
      den += l * l * l * l;
    }
    j["z_coefficient"] = json_number(num / den);
    if (free) out.check_close("regular factor coefficient at eps = " + format_double(eps), num / den, kappa, p.z_tol * kappa);
    json factors = json::array();
    for (double th : p.factor_thetas) {
      const double omf = prof.one_minus_factor(th);
      const double ref = eps * poisson_exponent(th, spec.hbar, z);
      factors.push_back({{"theta", json_number(th)}, {"one_minus_factor", json_number(omf)}, {"eps_J", json_number(ref)}});
      out.check_close("site factor deficit at eps = " + format_double(eps) + ", theta = " + format_double(th),
                      omf / ref, 1.0, p.factor_tol);
    }
    j["site_factors"] = factors;
    json prods = json::array();
    for (const auto& f : p.functions) {
      const auto cf = characteristic_function(spec, prof, f.sample(spec));
      const double closed = poisson_log_functional(spec.b, spec.hbar, z, f, s, L);
      const double logc = std::log(cf.values[0]).real();
      const double diff = std::abs(logc - closed);
      prods.push_back({{"test_function", f.description},
                       {"log_C", json_number(logc)},
                       {"closed_form_log_C", json_number(closed)},
                       {"abs_difference", json_number(diff)}});
      out.check_below("log C of the product matches the Poisson form for " + f.description + " at eps = " + format_double(eps),
                      diff, p.poisson_tol);
    }
    j["product_vs_closed_form"] = prods;
    per_eps.push_back(j);
  }
  out.summary["per_epsilon"] = per_eps;

  std::vector<LatticeSpec> family;
  for (double a : p.continuum_spacings) family.push_back(p.lattice.at(a));
  const ProfileBuilder build = [opts](const LatticeSpec& spec) { return eq_site_ground(spec, opts).profile; };
  json fns = json::object();
  const double b = base.b;
  const auto reference = [z_ref, b](double l) { return b * std::exp(-z_ref(l)) / l; };
  for (const auto& f : p.functions) {
    const auto r = continuum_limit(family, build, f, p.continuum);
    add_characteristic_rows(out.table, f.description, r);
    json j;
    j["limit_class"] = to_string(r.limit_class);
    j["kurtosis_functional"] = json_number(r.kurtosis_functional);
    j["thetas"] = number_list(r.thetas);
    j["log_C_at_base"] = base_log_values(r);
    j["diagnostics"] = r.diagnostics;
    out.check_below("|C| <= 1 for every value of " + f.description, modulus_excess(r), 1e-12);
    out.check("continuum limit of " + f.description + " is generalized Poisson",
              r.limit_class == LimitClass::GeneralizedPoisson, std::string("class ") + to_string(r.limit_class) + "; " + r.diagnostics);
    if (r.levy_fit) {
      const double err = levy_density_error(*r.levy_fit, reference, p.levy_lo, p.levy_hi);
      j["levy_fit"] = {{"A", json_number(r.levy_fit->A)},
                       {"gamma", json_number(r.levy_fit->gamma)},
                       {"kappa", json_number(r.levy_fit->kappa)},
                       {"residual", json_number(r.levy_fit->residual)},
                       {"density_error", json_number(err)}};
      out.check_below("fitted Levy density of " + f.description + " matches b exp(-z) / |lambda|", err, p.levy_tol);
    }
    fns[f.description] = j;
  }
  out.summary["test_functions"] = fns;
  const auto site = eq_site_ground(base, opts);
  out.summary["site_spectrum"] = hilbert::to_json(site.spectrum);
  const auto ax = check_axioms(base, site.profile, axiom_triple(base, L));
  out.summary["axioms"] = axiom_json(ax);
  out.check("characteristic functional axioms hold", ax.ok(), "C(0) = 1, |C| <= 1, C(-f) = conj C(f), Bochner");
  return out;
}

inline PreparedRun prepare_eq(const json& params, std::uint64_t) {
  auto p = parse_eq(params);
  return [p] { return run_eq(p); };
}

// ---------------------------------------------------------------------------------------------
// spectrum: low levels of the spiked oscillator or of one lattice site.

struct SpectrumParams {
  std::string model = "spiked-oscillator";
  hilbert::QuantizationParams qp;
  double spike = 0.75;
  std::size_t points = 4000;
  std::size_t n_levels = 6;
  std::optional<LatticeBlock> lattice;
  bool spike_limit = false;
  double tolerance = 1e-4;
};

inline SpectrumParams parse_spectrum(const json& params) {
  ConfigReader r(params, "params");
  SpectrumParams p;
  p.model = r.choice("model", {"spiked-oscillator", "eq-site", "cq-site"}, "spiked-oscillator");
  p.n_levels = r.count("n_levels", 6, 2);
  p.tolerance = r.positive("tolerance", 1e-4);
  if (p.model == "spiked-oscillator") {
    p.qp.hbar = r.positive("hbar", 1.0);
    p.qp.mass = r.positive("mass", 1.0);
    p.spike = r.number("spike", 0.75);
    if (!(p.spike >= 0.75)) throw ConfigError("params.spike must be >= 3/4");
    p.points = r.count("points", 4000, 200);
  } else {
    p.lattice = parse_lattice(r, "bare", 0.0);
    p.points = r.count("points", p.model == "eq-site" ? 4000 : 1601, 101);
    if (p.model == "cq-site" && p.points % 2 == 0) throw ConfigError("params.points must be odd for cq-site");
    p.spike_limit = p.model == "eq-site" ? r.boolean("spike_limit", false) : false;
  }
  r.finish();
  return p;
}

inline ExperimentOutput run_spectrum(const SpectrumParams& p) {
  using namespace ultralocal;
  ExperimentOutput out;
  hilbert::SpectrumResult spec;
  double gap = 0.0;
  bool exact_ladder = true;
  if (p.model == "spiked-oscillator") {
    const auto H = hilbert::spiked_oscillator(p.qp, hilbert::default_spiked_basis(p.qp, p.points), p.spike);
    spec = hilbert::eigen_spectrum(H, p.n_levels, true);
    gap = 2.0 * p.qp.hbar * p.qp.mass;
    out.summary["hbar"] = json_number(p.qp.hbar);
    out.summary["mass"] = json_number(p.qp.mass);
    out.summary["spike"] = json_number(p.spike);
  } else if (p.model == "eq-site") {
    EqSiteOptions o;
    o.points = p.points;
    o.n_levels = p.n_levels;
    o.spike_limit = p.spike_limit;
    spec = eq_site_ground(p.lattice->spec, o).spectrum;
    const auto c = eq_lattice_couplings(p.lattice->spec);
    gap = 2.0 * p.lattice->spec.hbar * c.mass;
    exact_ladder = c.quartic == 0.0;
    out.summary["lattice"] = lattice_json(p.lattice->spec);
  } else {
    CqSiteOptions o;
    o.points = p.points;
    o.n_levels = p.n_levels;
    spec = cq_site_ground(p.lattice->spec, o).spectrum;
    gap = p.lattice->spec.hbar * p.lattice->spec.m0;
    exact_ladder = p.lattice->spec.lambda0 == 0.0;
    out.summary["lattice"] = lattice_json(p.lattice->spec);
  }
  out.table = Table({"level", "energy", "ladder_value", "difference"});
  double worst = 0.0;
  for (std::size_t k = 0; k < spec.eigenvalues.size(); ++k) {
    const double ladder = gap * static_cast<double>(k);
    worst = std::max(worst, std::abs(spec.eigenvalues[k] - ladder) / gap);
    out.table.add({k, spec.eigenvalues[k], ladder, spec.eigenvalues[k] - ladder});
  }
  out.summary["model"] = p.model;
  out.summary["levels"] = number_list(spec.eigenvalues);
  out.summary["spectrum"] = hilbert::to_json(spec);
  out.summary["ladder_spacing"] = json_number(gap);
  double gap_dev = 0.0;
  for (double g : spec.gaps()) gap_dev = std::max(gap_dev, std::abs(g / gap - 1.0));
  out.summary["max_relative_ladder_deviation"] = json_number(worst);
  out.summary["max_relative_gap_deviation"] = json_number(gap_dev);
  if (exact_ladder) {
    out.check_below("levels form the ladder k * spacing", worst, p.tolerance);
    out.check_below("gaps are uniform", gap_dev, p.tolerance);
  }
  bool ascending = true;
  for (std::size_t k = 1; k < spec.eigenvalues.size(); ++k) ascending = ascending && spec.eigenvalues[k] > spec.eigenvalues[k - 1];
  out.check("levels are strictly ascending", ascending, "");
  return out;
}

inline PreparedRun prepare_spectrum(const json& params, std::uint64_t) {
  auto p = parse_spectrum(params);
  return [p] { return run_spectrum(p); };
}

// ---------------------------------------------------------------------------------------------
// affine-check: the affine current identity on a uniform grid.

struct AffineCheckParams {
  ultralocal::AffineCurrentOptions opts;
  std::size_t reference_grid = 2000;
  double F_tol = 0.01;
  double commutator_tol = 1e-6;
  double bracket_tol = 1e-8;
};

inline AffineCheckParams parse_affine_check(const json& params, std::uint64_t seed) {
  ConfigReader r(params, "params");
  AffineCheckParams p;
  p.opts.hbar = r.positive("hbar", 1.0);
  p.opts.cell_volume = r.positive("cell_volume", 1.0);
  p.opts.x_max = r.positive("x_max", 12.0);
  p.opts.order = static_cast<int>(r.integer("order", 4));
  if (p.opts.order < 1 || p.opts.order > 8) throw ConfigError("params.order must be in [1, 8]");
  std::vector<double> g;
  for (auto n : p.opts.grids) g.push_back(static_cast<double>(n));
  p.opts.grids.clear();
  for (double v : r.numbers("grids", g)) {
    if (!(v >= 1.0) || v != std::floor(v)) throw ConfigError("params.grids must list positive integers");
    p.opts.grids.push_back(static_cast<std::size_t>(v));
  }
  std::sort(p.opts.grids.begin(), p.opts.grids.end());
  p.opts.seed = seed;
  p.reference_grid = r.count("reference_grid", 2000, 1);
  p.F_tol = r.positive("F_tolerance", 0.01);
  p.commutator_tol = r.positive("commutator_tolerance", 1e-6);
  p.bracket_tol = r.positive("bracket_tolerance", 1e-8);
  r.finish();
  if (std::find(p.opts.grids.begin(), p.opts.grids.end(), p.reference_grid) == p.opts.grids.end())
    throw ConfigError("params.reference_grid must be one of params.grids");
  for (auto n : p.opts.grids)
    if (n < static_cast<std::size_t>(8 * p.opts.order)) throw ConfigError("params.grids entries are too small for the stencil");
  return p;
}

inline ExperimentOutput run_affine_check(const AffineCheckParams& p) {
  ExperimentOutput out;
  const auto rep = ultralocal::affine_current_check(p.opts);
  out.table = Table({"grid", "step", "F_prime", "F_prime_minus_three_quarters", "commutator_error"});
  double worst_comm = 0.0, F_ref = 0.0;
  for (std::size_t i = 0; i < rep.grids.size(); ++i) {
    out.table.add({rep.grids[i], p.opts.x_max / static_cast<double>(rep.grids[i]), rep.F_prime[i], rep.F_prime[i] - 0.75,
                   rep.commutator_error[i]});
    worst_comm = std::max(worst_comm, rep.commutator_error[i]);
    if (rep.grids[i] == p.reference_grid) F_ref = rep.F_prime[i];
  }
  out.summary["grids"] = rep.grids;
  out.summary["F_prime"] = number_list(rep.F_prime);
  out.summary["commutator_error"] = number_list(rep.commutator_error);
  out.summary["classical_bracket_error"] = json_number(rep.classical_bracket_error);
  out.summary["improving"] = rep.improving();
  out.check_close("spike coefficient at grid " + std::to_string(p.reference_grid), F_ref, 0.75, p.F_tol);
  out.check("spike coefficient approaches 3/4 under refinement", rep.improving(), "|F' - 3/4| decreases on every refinement");
  out.check_below("dilation commutator matches i hbar a^-s phi", worst_comm, p.commutator_tol);
  out.check_below("classical bracket {phi, pi phi} = phi", rep.classical_bracket_error, p.bracket_tol);
  return out;
}

inline PreparedRun prepare_affine_check(const json& params, std::uint64_t seed) {
  auto p = parse_affine_check(params, seed);
  return [p] { return run_affine_check(p); };
}

}  // namespace eqlab::cli
