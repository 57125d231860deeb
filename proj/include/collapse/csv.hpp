#pragma once

#include <cstdio>
#include <optional>
#include <string>

namespace collapse {

/// Fixed CSV float formatting: 12 significant digits, locale-independent.
inline std::string csv_num(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

inline std::string csv_num(long v) { return std::to_string(v); }
inline std::string csv_num(int v) { return std::to_string(v); }

/// Absent values are written explicitly, never fabricated as zeros.
inline std::string csv_opt(const std::optional<double>& v) {
  return v ? csv_num(*v) : std::string("NA");
}

}  // namespace collapse
