#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "eqlab/core/error.hpp"

namespace eqlab::cli {

using json = nlohmann::json;

/// Typed, strict access to one JSON object. Every key read is recorded; finish() rejects the
/// rest, so a misspelled key is an error instead of a silently ignored setting.
class ConfigReader {
 public:
  ConfigReader(const json& node, std::string path) : node_(&node), path_(std::move(path)) {
    if (!node.is_object()) throw ConfigError(where() + " must be a JSON object");
  }

  bool has(const std::string& key) const { return node_->contains(key); }

  double number(const std::string& key) {
    const json& v = require(key);
    if (!v.is_number()) throw ConfigError(where(key) + " must be a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw ConfigError(where(key) + " must be finite");
    return d;
  }
  double number(const std::string& key, double fallback) { return has(key) ? number(key) : mark(key, fallback); }

  double positive(const std::string& key, double fallback) {
    const double v = number(key, fallback);
    if (!(v > 0.0)) throw ConfigError(where(key) + " must be > 0");
    return v;
  }

  std::int64_t integer(const std::string& key) {
    const json& v = require(key);
    if (v.is_number_integer()) return v.get<std::int64_t>();
    if (v.is_number_float()) {
      const double d = v.get<double>();
      if (std::isfinite(d) && d == std::floor(d) && std::abs(d) < 9e15) return static_cast<std::int64_t>(d);
    }
    throw ConfigError(where(key) + " must be an integer");
  }
  std::int64_t integer(const std::string& key, std::int64_t fallback) {
    return has(key) ? integer(key) : mark(key, fallback);
  }

  std::size_t count(const std::string& key, std::size_t fallback, std::size_t min = 0) {
    const std::int64_t v = integer(key, static_cast<std::int64_t>(fallback));
    if (v < static_cast<std::int64_t>(min))
      throw ConfigError(where(key) + " must be an integer >= " + std::to_string(min));
    return static_cast<std::size_t>(v);
  }

  bool boolean(const std::string& key, bool fallback) {
    if (!has(key)) return mark(key, fallback);
    const json& v = require(key);
    if (!v.is_boolean()) throw ConfigError(where(key) + " must be true or false");
    return v.get<bool>();
  }

  std::string text(const std::string& key, const std::string& fallback) {
    if (!has(key)) return mark(key, fallback);
    const json& v = require(key);
    if (!v.is_string()) throw ConfigError(where(key) + " must be a string");
    return v.get<std::string>();
  }

  std::string choice(const std::string& key, std::initializer_list<const char*> options, const std::string& fallback) {
    const std::string v = text(key, fallback);
    std::string listed;
    for (const char* o : options) {
      if (v == o) return v;
      listed += listed.empty() ? "" : ", ";
      listed += o;
    }
    throw ConfigError(where(key) + " must be one of: " + listed + " (got \"" + v + "\")");
  }

  /// A list of numbers; a bare number is accepted as a one-element list.
  std::vector<double> numbers(const std::string& key, const std::vector<double>& fallback, bool allow_empty = false) {
    if (!has(key)) return mark(key, fallback);
    const json& v = require(key);
    std::vector<double> out;
    if (v.is_number()) {
      out.push_back(v.get<double>());
    } else if (v.is_array()) {
      for (const auto& e : v) {
        if (!e.is_number()) throw ConfigError(where(key) + " must contain only numbers");
        out.push_back(e.get<double>());
      }
    } else {
      throw ConfigError(where(key) + " must be a number or a list of numbers");
    }
    for (double d : out)
      if (!std::isfinite(d)) throw ConfigError(where(key) + " must contain finite numbers");
    if (out.empty() && !allow_empty) throw ConfigError(where(key) + " must not be empty");
    return out;
  }

  std::vector<std::string> strings(const std::string& key, const std::vector<std::string>& fallback) {
    if (!has(key)) return mark(key, fallback);
    const json& v = require(key);
    if (!v.is_array()) throw ConfigError(where(key) + " must be a list of strings");
    std::vector<std::string> out;
    for (const auto& e : v) {
      if (!e.is_string()) throw ConfigError(where(key) + " must contain only strings");
      out.push_back(e.get<std::string>());
    }
    return out;
  }

  /// List of [p, q] pairs.
  std::optional<std::vector<std::pair<double, double>>> pairs(const std::string& key) {
    if (!has(key)) return std::nullopt;
    const json& v = require(key);
    if (!v.is_array()) throw ConfigError(where(key) + " must be a list of [p, q] pairs");
    std::vector<std::pair<double, double>> out;
    for (const auto& e : v) {
      if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
        throw ConfigError(where(key) + " entries must be [p, q] number pairs");
      out.emplace_back(e[0].get<double>(), e[1].get<double>());
    }
    if (out.empty()) throw ConfigError(where(key) + " must not be empty");
    return out;
  }

  /// Nested object; absent keys give an empty object so defaults apply.
  ConfigReader child(const std::string& key) {
    seen_.insert(key);
    if (!has(key)) return ConfigReader(empty(), path_ + "." + key);
    return ConfigReader(node_->at(key), path_ + "." + key);
  }

  void finish() const {
    for (auto it = node_->begin(); it != node_->end(); ++it)
      if (!seen_.count(it.key())) throw ConfigError("unknown config key " + where(it.key()));
  }

  std::string where(const std::string& key = "") const { return key.empty() ? path_ : path_ + "." + key; }

 private:
  const json& require(const std::string& key) {
    seen_.insert(key);
    if (!has(key)) throw ConfigError("missing required config key " + where(key));
    return node_->at(key);
  }
  template <class T>
  T mark(const std::string& key, T v) {
    seen_.insert(key);
    return v;
  }
  static const json& empty() {
    static const json e = json::object();
    return e;
  }

  const json* node_;
  std::string path_;
  std::set<std::string> seen_;
};

inline const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names{"fs-metric",       "weak-correspondence", "rotsym-identity",
                                              "rotsym-compare-n3", "ultralocal-cq",      "ultralocal-eq",
                                              "spectrum",        "affine-check"};
  return names;
}

struct ExperimentConfig {
  std::string experiment;
  std::uint64_t seed = 1;
  std::string output_dir;  // empty: decided by the caller
  json params = json::object();
};

inline json parse_json_text(const std::string& text, const std::string& origin) {
  try {
    return json::parse(text, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw ConfigError(origin + ": invalid JSON: " + e.what());
  }
}

inline ExperimentConfig config_from_json(const json& root) {
  ConfigReader r(root, "config");
  ExperimentConfig c;
  c.experiment = r.text("experiment", "");
  if (c.experiment.empty()) throw ConfigError("missing required config key config.experiment");
  bool known = false;
  for (const auto& n : experiment_names()) known = known || n == c.experiment;
  if (!known) throw ConfigError("unknown experiment \"" + c.experiment + "\"");
  const std::int64_t seed = r.integer("seed", 1);
  if (seed < 0) throw ConfigError("config.seed must be >= 0");
  c.seed = static_cast<std::uint64_t>(seed);
  c.output_dir = r.text("output_dir", "");
  r.child("params");
  if (root.contains("params")) c.params = root.at("params");
  if (!c.params.is_object()) throw ConfigError("config.params must be a JSON object");
  r.finish();
  return c;
}

inline ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return config_from_json(parse_json_text(ss.str(), path.string()));
}

/// Replaces the number at a dotted path inside params ("lattice.a" or "params.lattice.a").
/// Intermediate objects are created as needed; an existing non-numeric value is an error.
inline void set_axis(json& params, std::string path, double value) {
  if (path.rfind("params.", 0) == 0) path = path.substr(7);
  if (path.empty()) throw ConfigError("sweep axis must not be empty");
  json* node = &params;
  std::size_t start = 0;
  while (true) {
    const std::size_t dot = path.find('.', start);
    const std::string key = path.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (key.empty()) throw ConfigError("malformed sweep axis \"" + path + "\"");
    if (!node->is_object()) throw ConfigError("sweep axis \"" + path + "\" passes through a non-object value");
    if (dot == std::string::npos) {
      if (node->contains(key) && !(*node)[key].is_number())
        throw ConfigError("sweep axis \"" + path + "\" names a non-numeric setting");
      (*node)[key] = value;
      return;
    }
    node = &(*node)[key];
    if (node->is_null()) *node = json::object();
    start = dot + 1;
  }
}

/// Parses "v1,v2,..." into numbers; an empty list is a configuration error.
inline std::vector<double> parse_value_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b == std::string::npos) continue;
    item = item.substr(b, e - b + 1);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size() || !std::isfinite(v)) throw ConfigError("sweep value \"" + item + "\" is not a number");
    out.push_back(v);
  }
  if (out.empty()) throw ConfigError("sweep needs at least one value");
  return out;
}

}  // namespace eqlab::cli
