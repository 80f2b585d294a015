#pragma once

#include <charconv>
#include <cmath>
#include <cstdio>
#include <string>

namespace spamtk {

// Shortest decimal string that round-trips the exact double value.
inline std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

// Fixed decimals, for human-facing report tables.
inline std::string format_fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
  return buf;
}

inline std::string format_percent(double fraction, int decimals = 1) {
  return format_fixed(fraction * 100.0, decimals) + "%";
}

}  // namespace spamtk
