#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "eqlab/cli/runner.hpp"

namespace fs = std::filesystem;
using namespace eqlab;
using namespace eqlab::cli;

namespace {

const fs::path kConfigs = EQLAB_CONFIG_DIR;

fs::path fresh_dir(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("eqlab_cli_" + name);
  fs::remove_all(d);
  return d;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path write_config(const std::string& name, const json& j) {
  const fs::path d = fs::temp_directory_path() / "eqlab_cli_configs";
  fs::create_directories(d);
  const fs::path p = d / name;
  std::ofstream(p) << j.dump(2);
  return p;
}

int run_tool(const std::string& args) {
  const std::string cmd = std::string(EQLAB_BINARY) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST(Runner, EveryShippedConfigParses) {
  std::size_t n = 0;
  for (const auto& e : fs::directory_iterator(kConfigs)) {
    const auto cfg = load_config(e.path());
    EXPECT_NO_THROW(prepare(cfg.experiment, cfg.params, cfg.seed)) << e.path();
    ++n;
  }
  EXPECT_GE(n, experiment_names().size());
}

TEST(Runner, WritesCsvSummaryAndManifest) {
  const auto cfg = load_config(kConfigs / "fs-metric.json");
  const auto dir = fresh_dir("fs");
  const auto m = run_experiment(cfg, dir);
  EXPECT_TRUE(m.passed);
  for (const char* f : {"fs-metric.csv", "summary.json", "manifest.json"}) EXPECT_TRUE(fs::exists(dir / f)) << f;
  const auto summary = json::parse(slurp(dir / "summary.json"));
  EXPECT_EQ(summary["seed"], cfg.seed);
  EXPECT_EQ(summary["config_hash"], m.config_hash);
  const auto manifest = json::parse(slurp(dir / "manifest.json"));
  EXPECT_EQ(manifest["seed"], cfg.seed);
  EXPECT_EQ(manifest["outputs"].size(), 2u);
  // No temporaries survive the atomic writes.
  for (const auto& e : fs::directory_iterator(dir)) EXPECT_NE(e.path().extension(), ".tmp");
}

TEST(Runner, CsvCarriesSeedColumnAndScientificFloats) {
  auto cfg = load_config(kConfigs / "fs-metric.json");
  cfg.seed = 12345;
  const auto dir = fresh_dir("seed");
  run_experiment(cfg, dir);
  std::istringstream csv(slurp(dir / "fs-metric.csv"));
  std::string header, row;
  std::getline(csv, header);
  std::getline(csv, row);
  EXPECT_EQ(header.rfind("seed,", 0), 0u);
  EXPECT_EQ(row.rfind("12345,", 0), 0u);
  EXPECT_NE(row.find("e+00"), std::string::npos);
}

TEST(Runner, OutputsAreDeterministic) {
  const auto cfg = load_config(kConfigs / "fs-metric.json");
  const auto a = fresh_dir("det_a"), b = fresh_dir("det_b");
  run_experiment(cfg, a);
  run_experiment(cfg, b);
  EXPECT_EQ(slurp(a / "fs-metric.csv"), slurp(b / "fs-metric.csv"));
  EXPECT_EQ(slurp(a / "summary.json"), slurp(b / "summary.json"));
}

TEST(Runner, SeedChangesRandomLabelsAndHash) {
  auto cfg = load_config(kConfigs / "fs-metric.json");
  const auto h1 = config_hash(cfg.experiment, 1, cfg.params);
  const auto h2 = config_hash(cfg.experiment, 2, cfg.params);
  EXPECT_NE(h1, h2);
  const auto a = fresh_dir("s1"), b = fresh_dir("s2");
  cfg.seed = 1;
  run_experiment(cfg, a);
  cfg.seed = 2;
  run_experiment(cfg, b);
  EXPECT_NE(slurp(a / "fs-metric.csv"), slurp(b / "fs-metric.csv"));
}

TEST(Runner, MissingLatticeSpacingWritesNothing) {
  auto cfg = load_config(kConfigs / "ultralocal-cq-free.json");
  cfg.params["lattice"].erase("a");
  const auto dir = fresh_dir("no_a");
  EXPECT_THROW(run_experiment(cfg, dir), ConfigError);
  EXPECT_FALSE(fs::exists(dir));
}

TEST(Runner, UnknownParameterIsRejected) {
  auto cfg = load_config(kConfigs / "spectrum.json");
  cfg.params["n_levelz"] = 4;
  EXPECT_THROW(prepare(cfg.experiment, cfg.params, cfg.seed), ConfigError);
}

TEST(Sweep, ValidatesEveryPointBeforeRunning) {
  const auto cfg = load_config(kConfigs / "ultralocal-cq-free.json");
  const auto dir = fresh_dir("sweep_bad");
  // 0.3 does not divide the unit box.
  EXPECT_THROW(run_sweep(cfg, "lattice.a", {0.2, 0.3}, dir), ConfigError);
  EXPECT_FALSE(fs::exists(dir));
}

TEST(Sweep, ExtrapolatesTheFreeGaussianExponent) {
  const auto cfg = load_config(kConfigs / "ultralocal-cq-free.json");
  const auto dir = fresh_dir("sweep");
  const auto m = run_sweep(cfg, "lattice.a", {0.2, 0.1, 0.05}, dir);
  EXPECT_TRUE(m.passed);
  const auto summary = json::parse(slurp(dir / "summary.json"));
  ASSERT_EQ(summary["points"].size(), 3u);
  // log C(f) = -int f^2 / (4 m0 hbar) for the constant 0.5 on the unit box.
  bool found = false;
  for (const auto& row : summary["analysis"]["continuum_extrapolation"]["test_functions"]["constant 0.5"]) {
    if (row["theta"].get<double>() != 1.0) continue;
    EXPECT_NEAR(row["extrapolated_log_C"].get<double>(), -0.0625, 1e-8);
    found = true;
  }
  EXPECT_TRUE(found) << summary["analysis"].dump();
  std::istringstream csv(slurp(dir / "ultralocal-cq-sweep.csv"));
  std::string header;
  std::getline(csv, header);
  EXPECT_EQ(header.rfind("seed,lattice.a,", 0), 0u);
}

TEST(Binary, ExitCodes) {
  const auto out = fresh_dir("bin");
  const std::string cfg = (kConfigs / "fs-metric.json").string();
  EXPECT_EQ(run_tool("fs-metric --config " + cfg + " --out " + (out / "ok").string()), 0);
  EXPECT_EQ(run_tool("fs-metric --config " + cfg + " --out " + (out / "seed").string() + " --seed 9"), 0);
  EXPECT_EQ(json::parse(slurp(out / "seed" / "summary.json"))["seed"], 9);
  EXPECT_EQ(run_tool("fs-metric --config /nonexistent.json"), 2);
  EXPECT_EQ(run_tool("spectrum --config " + cfg), 2);  // config names another experiment
  EXPECT_EQ(run_tool("sweep --config " + cfg + " --axis hbar --values ''"), 2);
  EXPECT_EQ(run_tool(""), 2);
  EXPECT_EQ(run_tool("--help"), 0);

  auto strict = load_config(kConfigs / "spectrum.json");
  json j = {{"experiment", "spectrum"}, {"seed", 1}, {"params", strict.params}};
  j["params"]["tolerance"] = 1e-14;
  const auto tight = write_config("tight.json", j);
  EXPECT_EQ(run_tool("spectrum --config " + tight.string() + " --out " + (out / "tight").string()), 4);

  json bad = {{"experiment", "ultralocal-cq"}, {"params", {{"lattice", {{"s", 1}}}}}};
  const auto missing = write_config("missing_a.json", bad);
  EXPECT_EQ(run_tool("ultralocal-cq --config " + missing.string() + " --out " + (out / "missing").string()), 2);
  EXPECT_FALSE(fs::exists(out / "missing"));
}
