// SPDX-License-Identifier: Apache-2.0
#pragma once

// Surface-form normalization for tool calls. Version 1 rules:
//   text      trim, collapse inner whitespace, ASCII case-fold
//   tool name case-fold and drop '_' (so `goto`, `Goto` and `GO_TO` agree)
//   date      ISO YYYY-MM-DD (YYYY/M/D also accepted)
//   clock     HH:MM (H:MM accepted)
//   number    shortest decimal rendering, integral values without a point
//   mode      synonyms folded onto one spelling (airplane -> flight, ...)

#include <cctype>
#include <cmath>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>

#include "tripdiag/core/model.hpp"

namespace tripdiag::sandbox {

inline constexpr int kNormalizerVersion = 1;

inline std::string fold_text(std::string_view s) {
  std::string out;
  bool space = false;
  for (char c : s) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      space = !out.empty();
      continue;
    }
    if (space) out += ' ';
    space = false;
    out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return out;
}

inline std::string normalize_tool_name(std::string_view name) {
  std::string out;
  for (char c : name) {
    if (c == '_' || c == '-' || std::isspace(static_cast<unsigned char>(c))) continue;
    out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return out;
}

/// CamelCase label used in reports: `intercity_transport_select` ->
/// `IntercityTransport`, `goto` -> `Goto`. Names without '_' keep their case
/// apart from the first letter.
inline std::string display_name(std::string_view name) {
  std::string base(name);
  constexpr std::string_view kSelect = "_select";
  if (base.size() > kSelect.size() && base.compare(base.size() - kSelect.size(), kSelect.size(), kSelect) == 0)
    base.resize(base.size() - kSelect.size());
  std::string out;
  bool upper = true;
  for (char c : base) {
    if (c == '_') {
      upper = true;
      continue;
    }
    out += upper ? static_cast<char>(std::toupper(static_cast<unsigned char>(c))) : c;
    upper = false;
  }
  return out;
}

inline std::string normalize_mode(std::string_view mode) {
  const std::string m = fold_text(mode);
  struct Syn {
    std::string_view from, to;
  };
  static constexpr Syn kSynonyms[] = {
      {"airplane", "flight"}, {"plane", "flight"},          {"air", "flight"},
      {"fly", "flight"},      {"rail", "train"},             {"high-speed rail", "train"},
      {"driving", "self-driving"}, {"drive", "self-driving"}, {"car", "self-driving"},
      {"self driving", "self-driving"}, {"cab", "taxi"},     {"subway", "metro"},
      {"walking", "walk"},
  };
  for (const auto& s : kSynonyms)
    if (s.from == m) return std::string(s.to);
  return m;
}

inline std::optional<std::string> normalize_date(const json& v) {
  if (!v.is_string()) return std::nullopt;
  auto d = Date::try_parse(fold_text(v.get<std::string>()));
  return d ? std::optional(d->str()) : std::nullopt;
}

inline std::optional<std::string> normalize_clock(const json& v) {
  if (!v.is_string()) return std::nullopt;
  std::string s = fold_text(v.get<std::string>());
  if (s.size() > 2 && (s.ends_with("am") || s.ends_with("pm"))) {
    const bool pm = s.ends_with("pm");
    s = fold_text(s.substr(0, s.size() - 2));
    if (s.find(':') == std::string::npos) s += ":00";
    auto m = try_parse_clock(s);
    if (!m || *m >= 13 * 60 || *m < 60) return std::nullopt;
    int minute = *m % (12 * 60) + (pm ? 12 * 60 : 0);
    return clock_str(minute);
  }
  auto m = try_parse_clock(s);
  return m ? std::optional(clock_str(*m)) : std::nullopt;
}

inline std::optional<double> number_value(const json& v) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    const std::string s = fold_text(v.get<std::string>());
    if (s.empty()) return std::nullopt;
    char* end = nullptr;
    const double d = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size() || !std::isfinite(d)) return std::nullopt;
    return d;
  }
  return std::nullopt;
}

inline std::string number_str(double d) {
  if (d == std::floor(d) && std::fabs(d) < 1e15) return std::to_string(static_cast<long long>(d));
  std::ostringstream os;
  os.precision(12);
  os << d;
  return os.str();
}

}  // namespace tripdiag::sandbox
