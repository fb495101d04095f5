#pragma once

#include <cstdio>
#include <string>

namespace warpcone {

// %.17g: shortest round-trip-safe fixed formatting, locale-independent, so
// identical runs serialize byte-identically.
inline std::string csv_num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline std::string csv_num(long long x) { return std::to_string(x); }
inline std::string csv_num(int x) { return std::to_string(x); }

}  // namespace warpcone
