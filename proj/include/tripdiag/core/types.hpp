// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>

#include "tripdiag/core/names.hpp"

namespace tripdiag {

using Money = std::int64_t;  // minor currency units (cents / fen)

/// Fixed-point number with one decimal, stored as tenths. Ratings use it.
struct Fixed1 {
  std::int64_t tenths = 0;

  friend auto operator<=>(const Fixed1&, const Fixed1&) = default;

  std::string str() const {
    const auto whole = tenths / 10;
    auto frac = tenths % 10;
    std::string sign = (tenths < 0 && whole == 0) ? "-" : "";
    if (frac < 0) frac = -frac;
    return sign + std::to_string(whole) + "." + std::to_string(frac);
  }
};

enum class PoiKind : std::uint8_t {
  flight,
  accommodation,
  restaurant,
  attraction,
  event,
  intercity_transit,
  innercity_transit,
};

inline constexpr auto kPoiKindNames = make_names(
    std::pair{PoiKind::flight, "flight"}, std::pair{PoiKind::accommodation, "accommodation"},
    std::pair{PoiKind::restaurant, "restaurant"}, std::pair{PoiKind::attraction, "attraction"},
    std::pair{PoiKind::event, "event"}, std::pair{PoiKind::intercity_transit, "intercity_transit"},
    std::pair{PoiKind::innercity_transit, "innercity_transit"});

inline constexpr PoiKind kAllPoiKinds[] = {PoiKind::flight,           PoiKind::accommodation,
                                           PoiKind::restaurant,       PoiKind::attraction,
                                           PoiKind::event,            PoiKind::intercity_transit,
                                           PoiKind::innercity_transit};

inline std::string_view to_string(PoiKind k) { return kPoiKindNames.name(k); }

inline bool is_intercity_leg(PoiKind k) { return k == PoiKind::flight || k == PoiKind::intercity_transit; }
inline bool is_transit(PoiKind k) { return is_intercity_leg(k) || k == PoiKind::innercity_transit; }

enum class Profile : std::uint8_t { tp_like, tc_like, ct_like };

inline constexpr auto kProfileNames = make_names(std::pair{Profile::tp_like, "TP-like"},
                                                 std::pair{Profile::tc_like, "TC-like"},
                                                 std::pair{Profile::ct_like, "CT-like"});

inline std::string_view to_string(Profile p) { return kProfileNames.name(p); }

enum class MealSlot : std::uint8_t { breakfast, lunch, dinner };

inline constexpr auto kMealSlotNames = make_names(std::pair{MealSlot::breakfast, "breakfast"},
                                                  std::pair{MealSlot::lunch, "lunch"},
                                                  std::pair{MealSlot::dinner, "dinner"});

inline std::string_view to_string(MealSlot m) { return kMealSlotNames.name(m); }

enum class ContextLevel : std::uint8_t { minimal, moderate, rich, correction };

inline constexpr auto kContextLevelNames =
    make_names(std::pair{ContextLevel::minimal, "minimal"}, std::pair{ContextLevel::moderate, "moderate"},
               std::pair{ContextLevel::rich, "rich"}, std::pair{ContextLevel::correction, "correction"});

inline std::string_view to_string(ContextLevel l) { return kContextLevelNames.name(l); }

enum class Subtask : std::uint8_t { extraction, tool_use, plan_generation, identification, correction };

inline constexpr auto kSubtaskNames = make_names(
    std::pair{Subtask::extraction, "extraction"}, std::pair{Subtask::tool_use, "tool_use"},
    std::pair{Subtask::plan_generation, "plan_generation"},
    std::pair{Subtask::identification, "identification"}, std::pair{Subtask::correction, "correction"});

inline constexpr Subtask kAllSubtasks[] = {Subtask::extraction, Subtask::tool_use, Subtask::plan_generation,
                                           Subtask::identification, Subtask::correction};

inline std::string_view to_string(Subtask s) { return kSubtaskNames.name(s); }

/// Violation taxonomy: one category per constraint head, plus structural checks.
enum class FindingCategory : std::uint8_t {
  days,
  people_number,
  budget,
  cost,
  room_type,
  house_rule,
  transportation,
  cuisine,
  visited_city,
  rating,
  poi_visited,
  repeated_activity,
  hallucinated_poi,
  transit_continuity,
  schema_error,
};

inline constexpr auto kFindingCategoryNames = make_names(
    std::pair{FindingCategory::days, "days"}, std::pair{FindingCategory::people_number, "people_number"},
    std::pair{FindingCategory::budget, "budget"}, std::pair{FindingCategory::cost, "cost"},
    std::pair{FindingCategory::room_type, "room_type"}, std::pair{FindingCategory::house_rule, "house_rule"},
    std::pair{FindingCategory::transportation, "transportation"},
    std::pair{FindingCategory::cuisine, "cuisine"}, std::pair{FindingCategory::visited_city, "visited_city"},
    std::pair{FindingCategory::rating, "rating"}, std::pair{FindingCategory::poi_visited, "poi_visited"},
    std::pair{FindingCategory::repeated_activity, "repeated_activity"},
    std::pair{FindingCategory::hallucinated_poi, "hallucinated_poi"},
    std::pair{FindingCategory::transit_continuity, "transit_continuity"},
    std::pair{FindingCategory::schema_error, "schema_error"});

inline std::string_view to_string(FindingCategory c) { return kFindingCategoryNames.name(c); }

}  // namespace tripdiag
