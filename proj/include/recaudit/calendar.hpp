#pragma once

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <charconv>
#include <string>
#include <string_view>
#include <vector>

#include "recaudit/error.hpp"

namespace recaudit {

using Date = std::chrono::sys_days;

/// Inclusive range of calendar years, e.g. 2009..2011.
struct Window {
  int first_year = 0;
  int last_year = 0;

  bool contains(int year) const noexcept {
    return year >= first_year && year <= last_year;
  }
  Date begin() const { return year_start(first_year); }
  Date end() const { return year_start(last_year + 1); }
  int years() const noexcept { return last_year - first_year + 1; }

  static Date year_start(int year) {
    return Date{std::chrono::year{year} / std::chrono::January / 1};
  }

  friend bool operator==(const Window&, const Window&) = default;
};

/// Half-open date range [start, end).
struct StaffInterval {
  Date start;
  Date end;

  friend bool operator==(const StaffInterval&, const StaffInterval&) = default;
};

/// Parses a strict ISO date "YYYY-MM-DD". Throws DataError.
inline Date parse_iso_date(std::string_view text) {
  auto number = [&](std::size_t pos, std::size_t len) {
    int v = 0;
    auto first = text.data() + pos;
    auto [ptr, ec] = std::from_chars(first, first + len, v);
    if (ec != std::errc{} || ptr != first + len)
      throw DataError("invalid date '" + std::string(text) + "'");
    return v;
  };
  if (text.size() != 10 || text[4] != '-' || text[7] != '-')
    throw DataError("invalid date '" + std::string(text) + "', expected YYYY-MM-DD");
  std::chrono::year_month_day ymd{std::chrono::year{number(0, 4)},
                                  std::chrono::month{unsigned(number(5, 2))},
                                  std::chrono::day{unsigned(number(8, 2))}};
  if (!ymd.ok()) throw DataError("invalid date '" + std::string(text) + "'");
  return Date{ymd};
}

inline std::string format_iso_date(Date d) {
  std::chrono::year_month_day ymd{d};
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", int(ymd.year()),
                unsigned(ymd.month()), unsigned(ymd.day()));
  return buf;
}

/// Parses "2009:2011" (a single year "2010" is also accepted).
inline Window parse_window(std::string_view text) {
  auto to_int = [&](std::string_view s) {
    int v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty())
      throw ConfigError("invalid window '" + std::string(text) + "', expected START:END");
    return v;
  };
  auto colon = text.find(':');
  Window w;
  if (colon == std::string_view::npos) {
    w.first_year = w.last_year = to_int(text);
  } else {
    w.first_year = to_int(text.substr(0, colon));
    w.last_year = to_int(text.substr(colon + 1));
  }
  if (w.first_year > w.last_year)
    throw ConfigError("invalid window '" + std::string(text) + "': start after end");
  return w;
}

inline int days_in_year(int year) {
  return int((Window::year_start(year + 1) - Window::year_start(year)).count());
}

/// Years of staff presence inside the window. Each calendar year contributes
/// overlap_days / days_in_that_year, so a fully covered year counts exactly 1.
/// Intervals must be non-overlapping.
inline double staff_years(const std::vector<StaffInterval>& intervals, const Window& window) {
  double total = 0.0;
  for (int y = window.first_year; y <= window.last_year; ++y) {
    const Date ys = Window::year_start(y);
    const Date ye = Window::year_start(y + 1);
    long days = 0;
    for (const auto& iv : intervals) {
      const Date s = std::max(iv.start, ys);
      const Date e = std::min(iv.end, ye);
      if (s < e) days += (e - s).count();
    }
    if (days > 0) total += double(days) / double(days_in_year(y));
  }
  return total;
}

/// True when the union of the intervals covers every day of the window.
inline bool covers_window(std::vector<StaffInterval> intervals, const Window& window) {
  std::sort(intervals.begin(), intervals.end(),
            [](const auto& a, const auto& b) { return a.start < b.start; });
  Date reached = window.begin();
  for (const auto& iv : intervals) {
    if (iv.start > reached) break;
    reached = std::max(reached, iv.end);
    if (reached >= window.end()) return true;
  }
  return reached >= window.end();
}

}  // namespace recaudit
