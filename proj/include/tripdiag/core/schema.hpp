// SPDX-License-Identifier: Apache-2.0
#pragma once

// Plan-document validation. Agent output flows through here, so every
// problem is collected into the error list instead of being thrown.

#include <optional>
#include <string>
#include <vector>

#include "tripdiag/core/serialize.hpp"

namespace tripdiag {

enum class SchemaErrorKind : std::uint8_t {
  not_parseable,
  unsupported_format,
  missing_field,
  wrong_type,
  invalid_value,
  day_count_mismatch,
  date_mismatch,
  overlapping_items,
  multiple_lodging,
};

inline constexpr auto kSchemaErrorNames = make_names(
    std::pair{SchemaErrorKind::not_parseable, "not_parseable"},
    std::pair{SchemaErrorKind::unsupported_format, "unsupported_format"},
    std::pair{SchemaErrorKind::missing_field, "missing_field"}, std::pair{SchemaErrorKind::wrong_type, "wrong_type"},
    std::pair{SchemaErrorKind::invalid_value, "invalid_value"},
    std::pair{SchemaErrorKind::day_count_mismatch, "day_count_mismatch"},
    std::pair{SchemaErrorKind::date_mismatch, "date_mismatch"},
    std::pair{SchemaErrorKind::overlapping_items, "overlapping_items"},
    std::pair{SchemaErrorKind::multiple_lodging, "multiple_lodging"});

inline std::string_view to_string(SchemaErrorKind k) { return kSchemaErrorNames.name(k); }

struct SchemaError {
  SchemaErrorKind kind;
  std::string path;  // JSON-pointer-like location, e.g. /days/1/items/0/kind
  std::string message;

  friend bool operator==(const SchemaError&, const SchemaError&) = default;
};

struct SchemaResult {
  std::optional<Itinerary> plan;
  std::vector<SchemaError> errors;

  bool ok() const { return plan.has_value(); }
  bool has(SchemaErrorKind k) const {
    for (const auto& e : errors)
      if (e.kind == k) return true;
    return false;
  }
};

namespace detail {

class SchemaChecker {
public:
  std::vector<SchemaError> errors;

  void add(SchemaErrorKind k, std::string path, std::string message) {
    errors.push_back({k, std::move(path), std::move(message)});
  }

  const json* field(const json& obj, const char* key, const std::string& path, bool required = true) {
    auto it = obj.find(key);
    if (it == obj.end() || (it->is_null() && required)) {
      if (required) add(SchemaErrorKind::missing_field, path + "/" + key, std::string("missing field '") + key + "'");
      return nullptr;
    }
    if (it->is_null()) return nullptr;
    return &*it;
  }

  std::optional<std::string> string_field(const json& obj, const char* key, const std::string& path, bool required = true) {
    const json* v = field(obj, key, path, required);
    if (!v) return std::nullopt;
    if (!v->is_string()) {
      add(SchemaErrorKind::wrong_type, path + "/" + key, std::string("'") + key + "' must be a string");
      return std::nullopt;
    }
    return v->get<std::string>();
  }

  std::optional<std::int64_t> int_field(const json& obj, const char* key, const std::string& path, bool required = true) {
    const json* v = field(obj, key, path, required);
    if (!v) return std::nullopt;
    if (!v->is_number_integer()) {
      add(SchemaErrorKind::wrong_type, path + "/" + key, std::string("'") + key + "' must be an integer");
      return std::nullopt;
    }
    return v->get<std::int64_t>();
  }

  std::optional<int> clock_field(const json& obj, const char* key, const std::string& path) {
    auto s = string_field(obj, key, path, false);
    if (!s) return std::nullopt;
    auto v = try_parse_clock(*s);
    if (!v) add(SchemaErrorKind::invalid_value, path + "/" + key, "invalid time of day '" + *s + "'");
    return v;
  }
};

}  // namespace detail

/// Checks a plan document. When `query` is given, the day count and dates
/// must match it.
inline SchemaResult validate_schema(const json& raw, const Query* query = nullptr) {
  detail::SchemaChecker c;
  SchemaResult result;
  if (!raw.is_object()) {
    c.add(SchemaErrorKind::wrong_type, "", "plan document must be a JSON object");
    result.errors = std::move(c.errors);
    return result;
  }
  if (auto it = raw.find("format"); it != raw.end() && *it != kFormatVersion)
    c.add(SchemaErrorKind::unsupported_format, "/format", "unsupported format " + it->dump());

  Itinerary plan;
  if (auto qid = c.string_field(raw, "query_id", "")) plan.query_id = *qid;

  const json* days = c.field(raw, "days", "");
  if (days && !days->is_array()) {
    c.add(SchemaErrorKind::wrong_type, "/days", "'days' must be an array");
    days = nullptr;
  }
  if (days) {
    for (std::size_t d = 0; d < days->size(); ++d) {
      const json& dj = (*days)[d];
      const std::string dpath = "/days/" + std::to_string(d);
      DayPlan day;
      if (!dj.is_object()) {
        c.add(SchemaErrorKind::wrong_type, dpath, "day must be an object");
        plan.days.push_back(day);
        continue;
      }
      if (auto ds = c.string_field(dj, "date", dpath)) {
        if (auto parsed = Date::try_parse(*ds)) day.date = *parsed;
        else c.add(SchemaErrorKind::invalid_value, dpath + "/date", "invalid date '" + *ds + "'");
      }
      const json* items = c.field(dj, "items", dpath);
      if (items && !items->is_array()) {
        c.add(SchemaErrorKind::wrong_type, dpath + "/items", "'items' must be an array");
        items = nullptr;
      }
      int lodging = 0;
      if (items) {
        for (std::size_t i = 0; i < items->size(); ++i) {
          const json& ij = (*items)[i];
          const std::string ipath = dpath + "/items/" + std::to_string(i);
          if (!ij.is_object()) {
            c.add(SchemaErrorKind::wrong_type, ipath, "item must be an object");
            continue;
          }
          ActivityItem item;
          if (auto k = c.string_field(ij, "kind", ipath)) {
            if (auto kind = kPoiKindNames.find(*k)) item.kind = *kind;
            else c.add(SchemaErrorKind::invalid_value, ipath + "/kind", "unknown kind '" + *k + "'");
          }
          if (auto id = c.string_field(ij, "poi_id", ipath)) item.poi_id = *id;
          if (auto cost = c.int_field(ij, "unit_cost", ipath)) {
            if (*cost < 0) c.add(SchemaErrorKind::invalid_value, ipath + "/unit_cost", "unit_cost must be >= 0");
            item.unit_cost = *cost;
          }
          if (auto q = c.int_field(ij, "quantity", ipath)) {
            if (*q < 1) c.add(SchemaErrorKind::invalid_value, ipath + "/quantity", "quantity must be >= 1");
            item.quantity = static_cast<int>(*q);
          }
          item.start = c.clock_field(ij, "start", ipath);
          item.end = c.clock_field(ij, "end", ipath);
          if (auto ms = c.string_field(ij, "meal_slot", ipath, false)) {
            if (auto slot = kMealSlotNames.find(*ms)) item.meal_slot = *slot;
            else c.add(SchemaErrorKind::invalid_value, ipath + "/meal_slot", "unknown meal slot '" + *ms + "'");
          }
          if (item.start && item.end && *item.end < *item.start)
            c.add(SchemaErrorKind::invalid_value, ipath, "item ends before it starts");
          if (item.kind == PoiKind::accommodation) ++lodging;
          day.items.push_back(std::move(item));
        }
      }
      if (lodging > 1) c.add(SchemaErrorKind::multiple_lodging, dpath, "more than one lodging item in a day");
      // Timed items must not overlap.
      std::vector<std::pair<int, int>> spans;
      for (const auto& it : day.items)
        if (it.start && it.end) spans.emplace_back(*it.start, *it.end);
      std::sort(spans.begin(), spans.end());
      for (std::size_t i = 1; i < spans.size(); ++i)
        if (spans[i].first < spans[i - 1].second) {
          c.add(SchemaErrorKind::overlapping_items, dpath, "timed items overlap");
          break;
        }
      plan.days.push_back(std::move(day));
    }
  }

  if (query && days) {
    if (plan.days.size() != query->dates.size()) {
      c.add(SchemaErrorKind::day_count_mismatch, "/days",
            "plan has " + std::to_string(plan.days.size()) + " days, query spans " + std::to_string(query->dates.size()));
    } else {
      for (std::size_t d = 0; d < plan.days.size(); ++d)
        if (plan.days[d].date != query->dates[d])
          c.add(SchemaErrorKind::date_mismatch, "/days/" + std::to_string(d) + "/date",
                "expected " + query->dates[d].str());
    }
  }
  if (query && !plan.query_id.empty() && plan.query_id != query->id)
    c.add(SchemaErrorKind::invalid_value, "/query_id", "plan is for query '" + plan.query_id + "'");

  result.errors = std::move(c.errors);
  if (result.errors.empty()) {
    Money total = 0;
    for (const auto& d : plan.days)
      for (const auto& it : d.items) total += it.unit_cost * it.quantity;
    plan.total_cost = total;
    result.plan = std::move(plan);
  }
  return result;
}

inline SchemaResult validate_schema_text(const std::string& text, const Query* query = nullptr) {
  json raw;
  try {
    raw = json::parse(text);
  } catch (const json::exception& e) {
    SchemaResult r;
    r.errors.push_back({SchemaErrorKind::not_parseable, "", e.what()});
    return r;
  }
  return validate_schema(raw, query);
}

}  // namespace tripdiag

namespace tripdiag {

/// Strict decode for trusted files (CLI inputs, case files).
inline Itinerary plan_from_json(const json& raw, const Query* query = nullptr) {
  auto r = validate_schema(raw, query);
  if (!r.ok()) {
    std::string msg = "invalid plan document:";
    for (const auto& e : r.errors) msg += " [" + std::string(to_string(e.kind)) + " " + e.path + ": " + e.message + "]";
    throw DataError(msg);
  }
  return std::move(*r.plan);
}

}  // namespace tripdiag
