#pragma once

#include <charconv>
#include <cmath>
#include <cstdio>
#include <string>

namespace simtext {

// Shortest round-trip decimal form; stable across runs and platforms using
// IEEE doubles, so machine-readable outputs stay byte-identical.
inline std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

// Fixed decimals for human-readable tables.
inline std::string format_fixed(double x, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, x);
  return std::string(buf);
}

}  // namespace simtext
