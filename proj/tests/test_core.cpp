#include <atomic>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "eqlab/cli/config.hpp"
#include "eqlab/core/format.hpp"
#include "eqlab/core/io.hpp"
#include "eqlab/core/parallel.hpp"

namespace fs = std::filesystem;
using eqlab::cli::json;

namespace {

fs::path scratch_dir(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("eqlab_core_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Format, TwelveSignificantDigitsScientific) {
  EXPECT_EQ(eqlab::format_double(1.0), "1.00000000000e+00");
  EXPECT_EQ(eqlab::format_double(-0.000123456789012345), "-1.23456789012e-04");
  EXPECT_EQ(eqlab::format_double(6.02214076e23), "6.02214076000e+23");
}

TEST(Format, NegativeZeroAndNonFinite) {
  EXPECT_EQ(eqlab::format_double(-0.0), "0.00000000000e+00");
  EXPECT_EQ(eqlab::format_double(std::nan("")), "nan");
  EXPECT_EQ(eqlab::format_double(HUGE_VAL), "inf");
  EXPECT_EQ(eqlab::format_double(-HUGE_VAL), "-inf");
}

TEST(Format, JsonNumberRoundsToCsvPrecision) {
  const double v = 1.0 / 3.0;
  EXPECT_EQ(eqlab::json_number(v).get<double>(), std::strtod(eqlab::format_double(v).c_str(), nullptr));
  EXPECT_TRUE(eqlab::json_number(std::nan("")).is_null());
}

TEST(AtomicWrite, CreatesParentsAndLeavesNoTemporary) {
  const auto d = scratch_dir("atomic");
  const auto target = d / "nested" / "file.txt";
  eqlab::atomic_write(target, "first");
  eqlab::atomic_write(target, "second");
  EXPECT_EQ(slurp(target), "second");
  std::size_t entries = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(target.parent_path())) ++entries;
  EXPECT_EQ(entries, 1u);
}

TEST(AtomicWrite, UnwritableLocationThrowsIoError) {
  const auto d = scratch_dir("blocked");
  eqlab::atomic_write(d / "plain", "x");
  // A regular file cannot serve as a directory.
  EXPECT_THROW(eqlab::atomic_write(d / "plain" / "child.txt", "y"), eqlab::IoError);
}

TEST(Table, QuotesTextAndFormatsNumbers) {
  eqlab::Table t({"name", "value", "count"});
  t.add({"a,b", 0.5, 3});
  t.add({"say \"hi\"", -2.0, std::size_t{7}});
  EXPECT_EQ(t.to_csv(),
            "name,value,count\n"
            "\"a,b\",5.00000000000e-01,3\n"
            "\"say \"\"hi\"\"\",-2.00000000000e+00,7\n");
}

TEST(Table, RowSizeMismatchIsContractViolation) {
  eqlab::Table t({"x", "y"});
  EXPECT_THROW(t.add({1.0}), eqlab::ContractViolation);
}

TEST(Table, LeadingColumnAndAppend) {
  eqlab::Table t({"x"});
  t.add({1.0});
  const auto seeded = t.with_leading_column("seed", "42");
  EXPECT_EQ(seeded.columns(), (std::vector<std::string>{"seed", "x"}));
  EXPECT_EQ(seeded.rows().front().front(), "42");
  eqlab::Table other({"y"});
  other.add({2.0});
  EXPECT_THROW(t.append(other), eqlab::ContractViolation);
}

TEST(Fnv1a, KnownVectors) {
  EXPECT_EQ(eqlab::fnv1a64(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(eqlab::fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
  EXPECT_EQ(eqlab::hex64(0xaf63dc4c8601ec8cULL), "af63dc4c8601ec8c");
}

TEST(ParallelMap, ResultsIndependentOfWorkerCount) {
  auto fn = [](std::size_t i) { return std::sin(static_cast<double>(i)) * static_cast<double>(i * i); };
  const auto serial = eqlab::parallel_map(257, fn, 1);
  for (unsigned w : {2u, 3u, 8u}) EXPECT_EQ(eqlab::parallel_map(257, fn, w), serial);
}

TEST(ParallelMap, PropagatesExceptions) {
  auto fn = [](std::size_t i) -> int {
    if (i == 5) throw eqlab::NumericalError("boom");
    return static_cast<int>(i);
  };
  EXPECT_THROW(eqlab::parallel_map(10, fn, 3), eqlab::NumericalError);
}

TEST(ConfigReader, RejectsUnknownKeys) {
  const json j = {{"known", 1.0}, {"typo", 2.0}};
  eqlab::cli::ConfigReader r(j, "params");
  EXPECT_DOUBLE_EQ(r.number("known"), 1.0);
  EXPECT_THROW(r.finish(), eqlab::ConfigError);
}

TEST(ConfigReader, TypeAndRangeChecks) {
  const json j = {{"n", 2.5}, {"s", "x"}, {"neg", -1.0}, {"flag", 1}};
  eqlab::cli::ConfigReader r(j, "params");
  EXPECT_THROW(r.integer("n"), eqlab::ConfigError);
  EXPECT_THROW(r.number("s"), eqlab::ConfigError);
  EXPECT_THROW(r.positive("neg", 1.0), eqlab::ConfigError);
  EXPECT_THROW(r.boolean("flag", false), eqlab::ConfigError);
  EXPECT_THROW(r.number("missing"), eqlab::ConfigError);
  EXPECT_EQ(r.choice("absent", {"a", "b"}, "b"), "b");
}

TEST(ConfigReader, ScalarAcceptedAsOneElementList) {
  const json j = {{"xs", 3.0}, {"empty", json::array()}};
  eqlab::cli::ConfigReader r(j, "params");
  EXPECT_EQ(r.numbers("xs", {}), std::vector<double>{3.0});
  EXPECT_THROW(r.numbers("empty", {1.0}), eqlab::ConfigError);
}

TEST(Config, TopLevelIsStrict) {
  EXPECT_THROW(eqlab::cli::config_from_json({{"experiment", "fs-metric"}, {"extra", 1}}), eqlab::ConfigError);
  EXPECT_THROW(eqlab::cli::config_from_json({{"experiment", "no-such-thing"}}), eqlab::ConfigError);
  const auto cfg = eqlab::cli::config_from_json({{"experiment", "spectrum"}, {"seed", 9}});
  EXPECT_EQ(cfg.seed, 9u);
  EXPECT_TRUE(cfg.params.is_object());
}

TEST(Config, MalformedTextIsConfigError) {
  EXPECT_THROW(eqlab::cli::parse_json_text("{\"experiment\": ", "inline"), eqlab::ConfigError);
}

TEST(Config, SetAxisWritesNestedNumbers) {
  json params = {{"lattice", {{"a", 0.2}}}, {"name", "x"}};
  eqlab::cli::set_axis(params, "params.lattice.a", 0.05);
  EXPECT_DOUBLE_EQ(params["lattice"]["a"].get<double>(), 0.05);
  eqlab::cli::set_axis(params, "hbar", 0.5);
  EXPECT_DOUBLE_EQ(params["hbar"].get<double>(), 0.5);
  EXPECT_THROW(eqlab::cli::set_axis(params, "name", 1.0), eqlab::ConfigError);
}

TEST(Config, ValueListParsing) {
  EXPECT_EQ(eqlab::cli::parse_value_list("0.2, 0.1,5e-2"), (std::vector<double>{0.2, 0.1, 0.05}));
  EXPECT_THROW(eqlab::cli::parse_value_list(""), eqlab::ConfigError);
  EXPECT_THROW(eqlab::cli::parse_value_list(",,"), eqlab::ConfigError);
  EXPECT_THROW(eqlab::cli::parse_value_list("1,abc"), eqlab::ConfigError);
}
