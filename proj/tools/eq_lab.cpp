// eq-lab: command-line driver for the experiments in include/eqlab/cli.

#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "eqlab/cli/runner.hpp"

namespace {

enum ExitCode { kOk = 0, kConfig = 2, kNumerical = 3, kAssertion = 4 };

void report(const eqlab::cli::RunManifest& m) {
  for (const auto& a : m.assertions)
    std::cout << (a.passed ? "PASS " : "FAIL ") << a.name << (a.detail.empty() ? "" : " (" + a.detail + ")") << "\n";
  std::cout << m.experiment << ": " << (m.passed ? "passed" : "FAILED") << ", outputs in " << m.directory.string()
            << "\n";
}

struct Options {
  std::string config;
  std::string out;
  long long seed = -1;
  std::string axis;
  std::string values;
};

eqlab::cli::ExperimentConfig load(const Options& o, const std::string& expected) {
  auto cfg = eqlab::cli::load_config(o.config);
  if (!expected.empty() && cfg.experiment != expected)
    throw eqlab::ConfigError("config " + o.config + " is for experiment \"" + cfg.experiment + "\", not \"" + expected +
                             "\"");
  if (o.seed >= 0) cfg.seed = static_cast<std::uint64_t>(o.seed);
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"eq-lab: numerical experiments on coherent-state quantization"};
  app.require_subcommand(1);
  Options opt;

  std::vector<std::pair<std::string, CLI::App*>> experiments;
  for (const auto& name : eqlab::cli::experiment_names()) {
    auto* sub = app.add_subcommand(name, "run the " + name + " experiment");
    sub->add_option("--config", opt.config, "JSON config file")->required();
    sub->add_option("--out", opt.out, "output directory");
    sub->add_option("--seed", opt.seed, "random seed (overrides the config)")->check(CLI::NonNegativeNumber);
    experiments.emplace_back(name, sub);
  }
  auto* sweep = app.add_subcommand("sweep", "run an experiment over a list of values of one parameter");
  sweep->add_option("--config", opt.config, "JSON config file")->required();
  sweep->add_option("--axis", opt.axis, "dotted path of the parameter, e.g. lattice.a")->required();
  sweep->add_option("--values", opt.values, "comma-separated values")->required();
  sweep->add_option("--out", opt.out, "output directory");
  sweep->add_option("--seed", opt.seed, "random seed (overrides the config)")->check(CLI::NonNegativeNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    eqlab::cli::RunManifest m;
    if (sweep->parsed()) {
      const auto cfg = load(opt, "");
      const auto values = eqlab::cli::parse_value_list(opt.values);
      m = eqlab::cli::run_sweep(cfg, opt.axis, values,
                                eqlab::cli::choose_output_dir(opt.out, cfg, cfg.experiment + "-sweep"));
    } else {
      for (const auto& [name, sub] : experiments) {
        if (!sub->parsed()) continue;
        const auto cfg = load(opt, name);
        m = eqlab::cli::run_experiment(cfg, eqlab::cli::choose_output_dir(opt.out, cfg, name));
      }
    }
    report(m);
    return m.passed ? kOk : kAssertion;
  } catch (const eqlab::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kConfig;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kConfig;
  } catch (const eqlab::IoError& e) {
    std::cerr << "output error: " << e.what() << "\n";
    return kNumerical;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kNumerical;
  }
}
