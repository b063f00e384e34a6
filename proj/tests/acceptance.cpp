// Acceptance suite: runs the shipped configurations and prints one PASS/FAIL line per criterion.
// Exits nonzero when any criterion fails.

#include <chrono>
#include <cmath>
#include <complex>
#include <functional>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "eqlab/cli/runner.hpp"

namespace fs = std::filesystem;
using eqlab::cli::Assertion;
using eqlab::cli::ExperimentOutput;

namespace {

const fs::path kConfigs = EQLAB_CONFIG_DIR;

struct Run {
  ExperimentOutput output;
  std::string error;
  double seconds = 0.0;
};

std::map<std::string, Run>& cache() {
  static std::map<std::string, Run> runs;
  return runs;
}

const Run& run(const std::string& config) {
  auto it = cache().find(config);
  if (it != cache().end()) return it->second;
  Run r;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    const auto cfg = eqlab::cli::load_config(kConfigs / (config + ".json"));
    r.output = eqlab::cli::prepare(cfg.experiment, cfg.params, cfg.seed)();
  } catch (const std::exception& e) {
    r.error = e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return cache().emplace(config, std::move(r)).first->second;
}

struct Selection {
  std::string config;
  std::function<bool(const std::string&)> pick;  // which assertions of that run count
};

bool contains(const std::string& s, const std::string& part) { return s.find(part) != std::string::npos; }

std::function<bool(const std::string&)> any_of(std::vector<std::string> parts) {
  return [parts](const std::string& name) {
    for (const auto& p : parts)
      if (contains(name, p)) return true;
    return false;
  };
}

const auto kAll = [](const std::string&) { return true; };

// Checks |C| <= 1 on every characteristic row that a run produced, independent of the
// experiment's own assertions.
std::string modulus_scan(const ExperimentOutput& out) {
  const auto& cols = out.table.columns();
  std::size_t re = cols.size(), im = cols.size();
  for (std::size_t i = 0; i < cols.size(); ++i) {
    if (cols[i] == "re_C") re = i;
    if (cols[i] == "im_C") im = i;
  }
  if (re == cols.size() || im == cols.size()) return "no characteristic columns";
  double worst = 0.0;
  for (const auto& row : out.table.rows())
    worst = std::max(worst, std::abs(std::complex<double>(std::stod(row[re]), std::stod(row[im]))));
  if (worst > 1.0 + 1e-12) return "|C| = " + eqlab::format_double(worst) + " exceeds 1";
  return "";
}

struct Criterion {
  int id;
  std::string title;
  std::vector<Selection> parts;
  std::function<std::string()> extra;  // returns a failure reason, or empty
};

}  // namespace

int main() {
  const auto axioms = any_of({"axioms hold", "|C| <= 1"});
  const std::vector<Criterion> criteria{
      {1, "flat canonical metric diag(1/omega, omega), zero curvature", {{"fs-metric", kAll}}, nullptr},
      {2, "affine metric (q^2/beta, beta/q^2) with curvature -2/beta", {{"fs-metric-affine", kAll}}, nullptr},
      {3, "weak correspondence: displaced = shifted, correction linear in hbar", {{"weak-correspondence", kAll}}, nullptr},
      {4,
       "rotationally symmetric identity and Fock oracle convergence",
       {{"rotsym-identity", any_of({"coherent-state image", "Fock-space oracle"})}},
       nullptr},
      {5, "shuffle symmetry at N = 52 over 1000 leapfrog steps", {{"rotsym-identity", any_of({"relabelled"})}}, nullptr},
      {6, "pseudo-free ladder 2 hbar m k with uniform gaps", {{"spectrum", kAll}}, nullptr},
      {7,
       "CQ triviality: moment scaling, Gaussian limit, free width 1/(4 m0 hbar)",
       {{"ultralocal-cq", any_of({"moment scales", "is Gaussian", "quartic cumulant"})},
        {"ultralocal-cq-free", any_of({"Gaussian width", "is Gaussian"})}},
       nullptr},
      {8,
       "EQ product matches the Poisson form in log C; Levy density within 3%",
       {{"ultralocal-eq", any_of({"Poisson form", "Levy density", "generalized Poisson"})}},
       nullptr},
      {9,
       "characteristic functional axioms on every computed result",
       {{"ultralocal-cq", axioms}, {"ultralocal-cq-free", axioms}, {"ultralocal-eq", axioms}},
       [] {
         for (const char* c : {"ultralocal-cq", "ultralocal-cq-free", "ultralocal-eq"}) {
           const auto why = modulus_scan(run(c).output);
           if (!why.empty()) return std::string(c) + ": " + why;
         }
         return std::string();
       }},
      {10, "lattice spike coefficient F' -> 3/4 under refinement", {{"affine-check", kAll}}, nullptr},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    std::string reason;
    std::size_t checked = 0;
    double seconds = 0.0;
    for (const auto& part : c.parts) {
      const bool fresh = cache().count(part.config) == 0;
      const Run& r = run(part.config);
      if (fresh) seconds += r.seconds;
      if (!r.error.empty()) {
        reason = part.config + " raised: " + r.error;
        break;
      }
      for (const Assertion& a : r.output.assertions) {
        if (!part.pick(a.name)) continue;
        ++checked;
        if (!a.passed && reason.empty()) reason = part.config + ": " + a.name + " (" + a.detail + ")";
      }
    }
    if (reason.empty() && checked == 0) reason = "no assertions matched";
    if (reason.empty() && c.extra) reason = c.extra();
    const bool ok = reason.empty();
    if (!ok) ++failures;
    std::cout << "criterion " << c.id << ": " << (ok ? "PASS" : "FAIL") << "  " << c.title << "  [" << checked
              << " checks, " << std::llround(seconds * 1000.0) << " ms]" << (ok ? "" : "  reason: " + reason) << "\n";
  }
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << "\n";
  return failures == 0 ? 0 : 1;
}
