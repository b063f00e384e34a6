#pragma once

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>

#include <json.hpp>

namespace eqlab {

/// Scientific notation with 12 significant digits; non-finite values print as nan / inf / -inf.
inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) v = 0.0;  // no "-0"
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.11e", v);
  return buf;
}

/// The double nearest to the 12-significant-digit rendering of v, so JSON output carries the
/// same precision as the CSV files. Non-finite values become JSON null.
inline nlohmann::json json_number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return std::strtod(format_double(v).c_str(), nullptr);
}

}  // namespace eqlab
