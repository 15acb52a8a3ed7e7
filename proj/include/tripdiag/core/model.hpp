// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "tripdiag/core/time.hpp"
#include "tripdiag/core/types.hpp"

namespace tripdiag {

using json = nlohmann::json;

/// A natural-language travel request with its structured header.
struct Query {
  std::string id;
  std::string text;
  std::string origin;
  std::vector<std::string> destinations;
  std::vector<Date> dates;
  int people = 1;
  Profile profile = Profile::tp_like;

  friend bool operator==(const Query&, const Query&) = default;
};

/// One catalog entity. Which optional attributes are set depends on `kind`.
struct PoiRecord {
  std::string id;
  PoiKind kind = PoiKind::attraction;
  std::string city;
  std::string name;

  Money price = 0;
  std::optional<Fixed1> rating;
  std::vector<std::string> cuisines;     // sorted
  std::optional<std::string> room_type;
  std::vector<std::string> house_rules;  // sorted
  std::optional<int> max_occupancy;

  // transit legs
  std::string origin;
  std::string destination;
  std::string mode;
  std::optional<Timestamp> depart;
  std::optional<Timestamp> arrive;
  std::optional<int> duration_min;
  std::string from_poi;  // innercity only
  std::string to_poi;

  std::optional<Date> event_date;
  std::optional<int> x_m;  // planar position inside the city, metres
  std::optional<int> y_m;

  friend bool operator==(const PoiRecord&, const PoiRecord&) = default;
};

struct ActivityItem {
  PoiKind kind = PoiKind::attraction;
  std::string poi_id;
  std::optional<int> start;  // minutes since midnight of the day's date
  std::optional<int> end;
  Money unit_cost = 0;
  int quantity = 1;
  std::optional<MealSlot> meal_slot;

  friend bool operator==(const ActivityItem&, const ActivityItem&) = default;
};

struct DayPlan {
  Date date;
  std::vector<ActivityItem> items;

  friend bool operator==(const DayPlan&, const DayPlan&) = default;
};

struct Itinerary {
  std::string query_id;
  std::vector<DayPlan> days;
  Money total_cost = 0;

  friend bool operator==(const Itinerary&, const Itinerary&) = default;

  std::size_t item_count() const {
    std::size_t n = 0;
    for (const auto& d : days) n += d.items.size();
    return n;
  }
};

struct InformationContext {
  std::string case_id;
  std::vector<std::string> records;  // sorted, unique
  ContextLevel level = ContextLevel::minimal;

  friend bool operator==(const InformationContext&, const InformationContext&) = default;
};

struct ToolCall {
  std::string tool_name;
  std::vector<std::pair<std::string, json>> arguments;

  friend bool operator==(const ToolCall&, const ToolCall&) = default;

  const json* argument(const std::string& name) const {
    for (const auto& [n, v] : arguments)
      if (n == name) return &v;
    return nullptr;
  }
};

struct Locus {
  std::size_t day = 0;
  std::size_t item = 0;

  friend auto operator<=>(const Locus&, const Locus&) = default;
};

struct ErrorFinding {
  FindingCategory category = FindingCategory::schema_error;
  std::optional<std::string> constraint;  // canonical DSL rendering
  std::optional<Locus> locus;
  std::string detail;

  friend bool operator==(const ErrorFinding&, const ErrorFinding&) = default;
};

}  // namespace tripdiag
