#pragma once

#include <cmath>
#include <cstdio>
#include <string>

namespace recaudit::fmt {

inline std::string fixed(double x, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, x);
  std::string s = buf;
  // "-0.000" carries no information and would differ between equal inputs.
  if (s.front() == '-' && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
  return s;
}

/// Floats in tables: 6 decimals, fixed notation.
inline std::string real(double x) { return fixed(x, 6); }

/// Percentages: 1 decimal.
inline std::string percent(double x) { return fixed(x, 1); }

/// p-values: 4 decimals.
inline std::string pvalue(double x) { return fixed(x, 4); }

/// Rounds to the given number of decimals for JSON output.
inline double rounded(double x, int decimals) {
  const double scale = std::pow(10.0, decimals);
  const double r = std::round(x * scale) / scale;
  return r == 0.0 ? 0.0 : r;
}

/// "x of n (p%)", the count-with-share style of the audit tables.
inline std::string count_of(std::size_t x, std::size_t n) {
  const double share = n == 0 ? 0.0 : 100.0 * double(x) / double(n);
  return std::to_string(x) + " of " + std::to_string(n) + " (" + percent(share) + "%)";
}

}  // namespace recaudit::fmt
