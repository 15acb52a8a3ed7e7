// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <chrono>
#include <compare>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>

#include "tripdiag/core/error.hpp"

namespace tripdiag {

/// Calendar date stored as days since 1970-01-01. No time zones.
struct Date {
  std::int32_t days = 0;

  friend auto operator<=>(const Date&, const Date&) = default;

  static std::optional<Date> from_ymd(int y, unsigned m, unsigned d) {
    const std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{m},
                                          std::chrono::day{d}};
    if (!ymd.ok()) return std::nullopt;
    return Date{static_cast<std::int32_t>(std::chrono::sys_days{ymd}.time_since_epoch().count())};
  }

  /// Accepts YYYY-MM-DD and YYYY/M/D.
  static std::optional<Date> try_parse(std::string_view text) {
    int y = 0;
    unsigned m = 0, d = 0;
    char sep1 = 0, sep2 = 0;
    int consumed = 0;
    const std::string s(text);
    if (std::sscanf(s.c_str(), "%d%c%u%c%u%n", &y, &sep1, &m, &sep2, &d, &consumed) != 5) return std::nullopt;
    if (static_cast<std::size_t>(consumed) != s.size()) return std::nullopt;
    if (sep1 != sep2 || (sep1 != '-' && sep1 != '/')) return std::nullopt;
    return from_ymd(y, m, d);
  }

  static Date parse(std::string_view text) {
    if (auto d = try_parse(text)) return *d;
    throw DataError("invalid date '" + std::string(text) + "'");
  }

  std::string str() const {
    const std::chrono::year_month_day ymd{std::chrono::sys_days{std::chrono::days{days}}};
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
    return buf;
  }

  Date plus(int n) const { return Date{days + n}; }
};

/// Minutes since midnight, "H:MM" or "HH:MM".
inline std::optional<int> try_parse_clock(std::string_view text) {
  unsigned h = 0, m = 0;
  int consumed = 0;
  const std::string s(text);
  if (std::sscanf(s.c_str(), "%u:%u%n", &h, &m, &consumed) != 2) return std::nullopt;
  if (static_cast<std::size_t>(consumed) != s.size()) return std::nullopt;
  if (h > 23 || m > 59) return std::nullopt;
  if (s.size() - s.find(':') != 3) return std::nullopt;
  return static_cast<int>(h * 60 + m);
}

inline int parse_clock(std::string_view text) {
  if (auto v = try_parse_clock(text)) return *v;
  throw DataError("invalid time of day '" + std::string(text) + "'");
}

inline std::string clock_str(int minute) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%02d:%02d", minute / 60, minute % 60);
  return buf;
}

struct Timestamp {
  Date date;
  int minute = 0;

  friend auto operator<=>(const Timestamp&, const Timestamp&) = default;

  /// "YYYY-MM-DD HH:MM" (a 'T' separator is also accepted).
  static Timestamp parse(std::string_view text) {
    const auto cut = text.find_first_of(" T");
    if (cut == std::string_view::npos) throw DataError("invalid timestamp '" + std::string(text) + "'");
    return Timestamp{Date::parse(text.substr(0, cut)), parse_clock(text.substr(cut + 1))};
  }

  std::string str() const { return date.str() + " " + clock_str(minute); }
};

}  // namespace tripdiag
