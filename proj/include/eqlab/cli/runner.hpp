#pragma once

#include <algorithm>
#include <chrono>
#include <ctime>
#include <limits>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "eqlab/cli/config.hpp"
#include "eqlab/cli/exp_geometry.hpp"
#include "eqlab/cli/exp_rotsym.hpp"
#include "eqlab/cli/exp_ultralocal.hpp"
#include "eqlab/cli/experiment.hpp"
#include "eqlab/core/io.hpp"

namespace eqlab::cli {

inline constexpr const char* kToolVersion = "0.1.0";

inline const std::map<std::string, Preparer>& registry() {
  static const std::map<std::string, Preparer> r{
      {"fs-metric", prepare_fs_metric},
      {"weak-correspondence", prepare_weak},
      {"rotsym-identity", prepare_rotsym_identity},
      {"rotsym-compare-n3", prepare_compare},
      {"ultralocal-cq", prepare_cq},
      {"ultralocal-eq", prepare_eq},
      {"spectrum", prepare_spectrum},
      {"affine-check", prepare_affine_check},
  };
  return r;
}

inline PreparedRun prepare(const std::string& experiment, const json& params, std::uint64_t seed) {
  const auto it = registry().find(experiment);
  if (it == registry().end()) throw ConfigError("unknown experiment \"" + experiment + "\"");
  return it->second(params, seed);
}

/// Hash of the effective configuration rendered as canonical JSON.
inline std::string config_hash(const std::string& experiment, std::uint64_t seed, const json& params) {
  const json canon = {{"experiment", experiment}, {"seed", seed}, {"params", params}};
  return hex64(fnv1a64(canon.dump()));
}

inline std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

struct RunManifest {
  std::string experiment;
  std::uint64_t seed = 0;
  std::string config_hash;
  std::string tool_version = kToolVersion;
  std::string started_at;
  std::string finished_at;
  std::vector<std::string> outputs;
  std::vector<Assertion> assertions;
  bool passed = false;
  std::filesystem::path directory;

  json to_json() const {
    json a = json::array();
    for (const auto& x : assertions) a.push_back({{"name", x.name}, {"passed", x.passed}, {"detail", x.detail}});
    return {{"experiment", experiment}, {"seed", seed},           {"config_hash", config_hash},
            {"tool_version", tool_version}, {"started_at", started_at}, {"finished_at", finished_at},
            {"outputs", outputs},        {"assertions", a},       {"passed", passed}};
  }
};

inline json assertions_json(const std::vector<Assertion>& as) {
  json a = json::array();
  for (const auto& x : as) a.push_back({{"name", x.name}, {"passed", x.passed}, {"detail", x.detail}});
  return a;
}

/// Writes the CSV and summary, then the manifest that lists them. Every file goes through
/// atomic_write, and nothing is written before the computation has finished.
inline RunManifest write_outputs(RunManifest m, const std::filesystem::path& dir, const std::string& stem,
                                 const Table& table, json summary) {
  const std::string csv_name = stem + ".csv";
  summary["experiment"] = m.experiment;
  summary["seed"] = m.seed;
  summary["config_hash"] = m.config_hash;
  summary["assertions"] = assertions_json(m.assertions);
  summary["passed"] = m.passed;
  atomic_write(dir / csv_name, table.to_csv());
  atomic_write(dir / "summary.json", summary.dump(2) + "\n");
  m.outputs = {csv_name, "summary.json"};
  m.finished_at = utc_timestamp();
  m.directory = dir;
  atomic_write(dir / "manifest.json", m.to_json().dump(2) + "\n");
  return m;
}

inline std::filesystem::path choose_output_dir(const std::string& cli_out, const ExperimentConfig& cfg,
                                               const std::string& fallback) {
  if (!cli_out.empty()) return cli_out;
  if (!cfg.output_dir.empty()) return cfg.output_dir;
  return std::filesystem::path("out") / fallback;
}

inline RunManifest run_experiment(const ExperimentConfig& cfg, const std::filesystem::path& dir) {
  RunManifest m;
  m.experiment = cfg.experiment;
  m.seed = cfg.seed;
  m.config_hash = config_hash(cfg.experiment, cfg.seed, cfg.params);
  m.started_at = utc_timestamp();
  auto run = prepare(cfg.experiment, cfg.params, cfg.seed);
  ExperimentOutput out = run();
  m.assertions = out.assertions;
  m.passed = out.passed();
  const Table table = out.table.with_leading_column("seed", std::to_string(cfg.seed));
  return write_outputs(std::move(m), dir, cfg.experiment, table, std::move(out.summary));
}

/// Post-analysis across sweep points for the combinations where one is meaningful.
inline json sweep_analysis(const std::string& experiment, const std::string& axis, const std::vector<double>& values,
                           const std::vector<json>& summaries) {
  json a = json::object();
  std::string key = axis.rfind("params.", 0) == 0 ? axis.substr(7) : axis;
  if (experiment == "weak-correspondence" && key == "hbar" && values.size() >= 2) {
    json per = json::object();
    for (const auto& [name, _] : summaries.front().at("hamiltonians").items()) {
      std::vector<double> y;
      for (std::size_t k = 0; k < summaries.size(); ++k) {
        // Each point contributes its mean correction at its own hbar.
        const auto& h = summaries[k].at("hamiltonians").at(name);
        const auto& hb = h.at("hbar");
        const auto& mc = h.at("mean_quantum_correction");
        double v = std::numeric_limits<double>::quiet_NaN();
        for (std::size_t i = 0; i < hb.size(); ++i)
          if (!hb[i].is_null() && std::abs(hb[i].get<double>() / values[k] - 1.0) < 1e-9) v = mc[i].get<double>();
        y.push_back(v);
      }
      const auto fit = fit_line(values, y);
      per[name] = {{"hbar", number_list(values)},
                   {"mean_quantum_correction", number_list(y)},
                   {"slope", json_number(fit.slope)},
                   {"intercept", json_number(fit.intercept)},
                   {"max_fit_residual", json_number(fit.max_residual)}};
    }
    a["hbar_linear_fit"] = per;
  }
  if ((experiment == "ultralocal-cq" || experiment == "ultralocal-eq") && key == "lattice.a" && values.size() >= 3) {
    // Each point reports log C on its own base lattice; extrapolate those in a^s to a = 0.
    const int dim = summaries.front().at("lattice").at("s").get<int>();
    std::vector<double> xs;
    for (double v : values) xs.push_back(std::pow(v, dim));
    std::vector<double> sorted = xs;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      a["continuum_extrapolation"] = {{"skipped", "repeated lattice spacings"}};
      return a;
    }
    json per = json::object();
    for (const auto& [name, fn] : summaries.front().at("test_functions").items()) {
      const auto thetas = fn.at("thetas");
      json rows = json::array();
      for (std::size_t t = 0; t < thetas.size(); ++t) {
        std::vector<double> ys;
        for (const auto& s : summaries) ys.push_back(s.at("test_functions").at(name).at("log_C_at_base").at(t).get<double>());
        rows.push_back({{"theta", thetas[t]}, {"log_C", number_list(ys)},
                        {"extrapolated_log_C", json_number(ultralocal::neville_at_zero(xs, ys))}});
      }
      per[name] = rows;
    }
    a["continuum_extrapolation"] = {{"variable", "a^s"}, {"a", number_list(values)}, {"test_functions", per}};
    json levels = json::array();
    for (const auto& s : summaries)
      if (s.contains("site_spectrum")) levels.push_back(s.at("site_spectrum"));
    a["site_spectra_by_a"] = levels;
  }
  return a;
}

inline RunManifest run_sweep(const ExperimentConfig& cfg, const std::string& axis, const std::vector<double>& values,
                             const std::filesystem::path& dir) {
  if (values.empty()) throw ConfigError("sweep needs at least one value");
  RunManifest m;
  m.experiment = cfg.experiment;
  m.seed = cfg.seed;
  m.started_at = utc_timestamp();
  // Validate every point before running any of them.
  std::vector<PreparedRun> runs;
  std::vector<json> point_params;
  for (double v : values) {
    json params = cfg.params;
    set_axis(params, axis, v);
    runs.push_back(prepare(cfg.experiment, params, cfg.seed));
    point_params.push_back(std::move(params));
  }
  json hashed = {{"axis", axis}, {"values", values}, {"base", cfg.params}};
  m.config_hash = config_hash(cfg.experiment, cfg.seed, hashed);
  Table combined;
  std::vector<json> summaries;
  json points = json::array();
  bool passed = true;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    ExperimentOutput out = runs[i]();
    const Table t = out.table.with_leading_column(axis, format_double(values[i]))
                        .with_leading_column("seed", std::to_string(cfg.seed));
    combined.append(t);
    for (auto a : out.assertions) {
      a.name = axis + " = " + format_double(values[i]) + ": " + a.name;
      m.assertions.push_back(a);
    }
    passed = passed && out.passed();
    summaries.push_back(out.summary);
    points.push_back({{"value", json_number(values[i])},
                      {"config_hash", config_hash(cfg.experiment, cfg.seed, point_params[i])},
                      {"passed", out.passed()},
                      {"summary", out.summary}});
  }
  m.passed = passed;
  json summary = {{"axis", axis}, {"values", number_list(values)}, {"points", points},
                  {"analysis", sweep_analysis(cfg.experiment, axis, values, summaries)}};
  return write_outputs(std::move(m), dir, cfg.experiment + "-sweep", combined, std::move(summary));
}

}  // namespace eqlab::cli
