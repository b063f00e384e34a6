#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "eqlab/cli/config.hpp"
#include "eqlab/core/format.hpp"
#include "eqlab/core/io.hpp"

namespace eqlab::cli {

/// One acceptance check made by an experiment run.
struct Assertion {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct ExperimentOutput {
  Table table;
  json summary = json::object();
  std::vector<Assertion> assertions;

  bool passed() const {
    for (const auto& a : assertions)
      if (!a.passed) return false;
    return true;
  }

  /// Records a bound check |value - target| <= tol with a readable detail line.
  void check_close(const std::string& name, double value, double target, double tol) {
    std::ostringstream d;
    d << "value " << format_double(value) << ", target " << format_double(target) << ", |diff| "
      << format_double(std::abs(value - target)) << " <= " << format_double(tol);
    assertions.push_back({name, std::abs(value - target) <= tol, d.str()});
  }
  void check_below(const std::string& name, double value, double bound) {
    std::ostringstream d;
    d << "value " << format_double(value) << " <= " << format_double(bound);
    assertions.push_back({name, value <= bound, d.str()});
  }
  void check(const std::string& name, bool ok, const std::string& detail) { assertions.push_back({name, ok, detail}); }
};

/// An experiment prepares (parses and validates every parameter, with no heavy work) and returns
/// a closure that runs it. Config problems therefore surface before anything is computed.
using PreparedRun = std::function<ExperimentOutput()>;
using Preparer = std::function<PreparedRun(const json& params, std::uint64_t seed)>;

/// Deterministic stream for an experiment; the salt separates independent draws.
inline std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t salt) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(salt), static_cast<std::uint32_t>(salt >> 32)};
  return std::mt19937_64(seq);
}

/// Uniform double in [lo, hi) from the raw 64-bit stream, so draws do not depend on the
/// standard library's distribution implementation.
inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double max_residual = 0.0;
};

/// Ordinary least squares y = intercept + slope x.
inline LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw ConfigError("a line fit needs at least two points");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double den = n * sxx - sx * sx;
  if (den == 0.0) throw ConfigError("a line fit needs at least two distinct abscissae");
  LineFit f;
  f.slope = (n * sxy - sx * sy) / den;
  f.intercept = (sy - f.slope * sx) / n;
  for (std::size_t i = 0; i < x.size(); ++i)
    f.max_residual = std::max(f.max_residual, std::abs(y[i] - f.intercept - f.slope * x[i]));
  return f;
}

/// Slope of log|y| against log x.
inline double power_law_exponent(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size(); ++i) {
    lx.push_back(std::log(x[i]));
    ly.push_back(std::log(std::abs(y[i])));
  }
  return fit_line(lx, ly).slope;
}

inline json number_list(const std::vector<double>& v) {
  json out = json::array();
  for (double d : v) out.push_back(json_number(d));
  return out;
}

}  // namespace eqlab::cli
