#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <system_error>
#include <type_traits>
#include <vector>

#include "eqlab/core/error.hpp"
#include "eqlab/core/format.hpp"

namespace eqlab {

/// Thrown when an output cannot be written.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Writes content to path through a sibling temporary file and a rename, so readers never see a
/// partially written file.
inline void atomic_write(const std::filesystem::path& path, const std::string& content) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
  if (ec) throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
    out << content;
    out.flush();
    if (!out) throw IoError("write to " + tmp.string() + " failed");
  }
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp);
    throw IoError("cannot rename " + tmp.string() + " to " + path.string() + ": " + ec.message());
  }
}

/// 64-bit FNV-1a, used to fingerprint canonical config text.
inline std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

/// A CSV table held as formatted cells.
class Table {
 public:
  Table() = default;
  explicit Table(std::vector<std::string> columns) : columns_(std::move(columns)) {}

  const std::vector<std::string>& columns() const { return columns_; }
  const std::vector<std::vector<std::string>>& rows() const { return rows_; }
  bool empty() const { return rows_.empty(); }

  /// One formatted cell: doubles in scientific notation, integers verbatim, text quoted if needed.
  struct Cell {
    std::string text;
    Cell(double v) : text(format_double(v)) {}
    template <class I, std::enable_if_t<std::is_integral_v<I>, int> = 0>
    Cell(I v) : text(std::to_string(v)) {}
    Cell(const std::string& v) : text(quote(v)) {}
    Cell(const char* v) : text(quote(v)) {}

    static std::string quote(const std::string& s) {
      if (s.find_first_of(",\"\n") == std::string::npos) return s;
      std::string q = "\"";
      for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
      return q + "\"";
    }
  };

  void add(std::vector<Cell> cells) {
    if (cells.size() != columns_.size())
      throw ContractViolation("table row has " + std::to_string(cells.size()) + " cells, expected " +
                              std::to_string(columns_.size()));
    std::vector<std::string> r;
    for (auto& c : cells) r.push_back(std::move(c.text));
    rows_.push_back(std::move(r));
  }

  /// Prepends a constant column (used for the seed and for sweep axes).
  Table with_leading_column(const std::string& name, const std::string& value) const {
    Table t;
    t.columns_.push_back(name);
    t.columns_.insert(t.columns_.end(), columns_.begin(), columns_.end());
    for (const auto& r : rows_) {
      std::vector<std::string> nr{value};
      nr.insert(nr.end(), r.begin(), r.end());
      t.rows_.push_back(std::move(nr));
    }
    return t;
  }

  /// Appends the rows of a table with identical columns.
  void append(const Table& other) {
    if (columns_.empty()) columns_ = other.columns_;
    if (other.columns_ != columns_) throw ContractViolation("cannot append tables with different columns");
    rows_.insert(rows_.end(), other.rows_.begin(), other.rows_.end());
  }

  std::string to_csv() const {
    std::string out;
    auto line = [&](const std::vector<std::string>& cells) {
      for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out += ',';
        out += cells[i];
      }
      out += '\n';
    };
    line(columns_);
    for (const auto& r : rows_) line(r);
    return out;
  }

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<std::string>> rows_;
};

}  // namespace eqlab
