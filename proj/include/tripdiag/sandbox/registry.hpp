// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "tripdiag/core/error.hpp"
#include "tripdiag/core/serialize.hpp"
#include "tripdiag/sandbox/normalize.hpp"

namespace tripdiag::sandbox {

enum class ParamType : std::uint8_t { city, date, date_range, clock, mode, text, field_key, filter, integer, number };

inline constexpr auto kParamTypeNames = make_names(
    std::pair{ParamType::city, "city"}, std::pair{ParamType::date, "date"},
    std::pair{ParamType::date_range, "date_range"}, std::pair{ParamType::clock, "clock"},
    std::pair{ParamType::mode, "mode"}, std::pair{ParamType::text, "text"},
    std::pair{ParamType::field_key, "field_key"}, std::pair{ParamType::filter, "filter"},
    std::pair{ParamType::integer, "integer"}, std::pair{ParamType::number, "number"});

inline std::string_view to_string(ParamType t) { return kParamTypeNames.name(t); }

struct ParamSpec {
  std::string name;
  ParamType type = ParamType::text;
  bool required = true;
};

/// What a tool returns: records of one kind, or distance-matrix rows
/// (transit legs between two cities).
enum class ResultKind : std::uint8_t { records, distance_rows };

/// Which lookup a tool performs. Several profiles share one behaviour.
enum class ToolOp : std::uint8_t {
  flight_search,
  city_listing,
  event_search,
  distance_matrix,
  filtered_select,
  nearby_restaurants,
  intercity_select,
  inner_city_route,
};

struct ToolSpec {
  std::string name;
  Profile profile = Profile::tp_like;
  ToolOp op = ToolOp::city_listing;
  PoiKind kind = PoiKind::attraction;  // record kind served (first kind for transit tools)
  ResultKind result = ResultKind::records;
  std::vector<ParamSpec> params;

  const ParamSpec* param(std::string_view n) const {
    const auto key = normalize_tool_name(n);
    for (const auto& p : params)
      if (normalize_tool_name(p.name) == key) return &p;
    return nullptr;
  }
};

namespace detail {

inline ToolSpec tool(std::string name, Profile profile, ToolOp op, PoiKind kind, std::vector<ParamSpec> params,
                     ResultKind result = ResultKind::records) {
  return ToolSpec{std::move(name), profile, op, kind, result, std::move(params)};
}

}  // namespace detail

/// Closed tool family of a benchmark profile, in a fixed order.
inline std::vector<ToolSpec> register_profile(Profile profile) {
  using detail::tool;
  using P = ParamType;
  switch (profile) {
    case Profile::tp_like:
      return {
          tool("FlightSearch", profile, ToolOp::flight_search, PoiKind::flight,
               {{"origin", P::city}, {"destination", P::city}, {"date", P::date}}),
          tool("AccommodationSearch", profile, ToolOp::city_listing, PoiKind::accommodation, {{"city", P::city}}),
          tool("AttractionSearch", profile, ToolOp::city_listing, PoiKind::attraction, {{"city", P::city}}),
          tool("RestaurantSearch", profile, ToolOp::city_listing, PoiKind::restaurant, {{"city", P::city}}),
          tool("DistanceMatrix", profile, ToolOp::distance_matrix, PoiKind::intercity_transit,
               {{"origin", P::city}, {"destination", P::city}, {"mode", P::mode}}, ResultKind::distance_rows),
      };
    case Profile::tc_like:
      return {
          tool("Flights", profile, ToolOp::flight_search, PoiKind::flight,
               {{"origin", P::city}, {"destination", P::city}, {"date", P::date}}),
          tool("Accommodations", profile, ToolOp::city_listing, PoiKind::accommodation, {{"city", P::city}}),
          tool("Attractions", profile, ToolOp::city_listing, PoiKind::attraction, {{"city", P::city}}),
          tool("Restaurants", profile, ToolOp::city_listing, PoiKind::restaurant, {{"city", P::city}}),
          tool("Events", profile, ToolOp::event_search, PoiKind::event, {{"city", P::city}, {"dates", P::date_range}}),
          tool("GoogleDistanceMatrix", profile, ToolOp::distance_matrix, PoiKind::intercity_transit,
               {{"origin", P::city}, {"destination", P::city}, {"mode", P::mode}}, ResultKind::distance_rows),
      };
    case Profile::ct_like:
      return {
          tool("attractions_select", profile, ToolOp::filtered_select, PoiKind::attraction,
               {{"city", P::city}, {"key", P::field_key}, {"func", P::filter}}),
          tool("accommodations_select", profile, ToolOp::filtered_select, PoiKind::accommodation,
               {{"city", P::city}, {"key", P::field_key}, {"func", P::filter}}),
          tool("restaurants_select", profile, ToolOp::filtered_select, PoiKind::restaurant,
               {{"city", P::city}, {"key", P::field_key}, {"func", P::filter}}),
          tool("restaurants_nearby", profile, ToolOp::nearby_restaurants, PoiKind::restaurant,
               {{"city", P::city}, {"point", P::text}, {"topk", P::integer}, {"dist", P::number}}),
          tool("intercity_transport_select", profile, ToolOp::intercity_select, PoiKind::intercity_transit,
               {{"start_city", P::city}, {"end_city", P::city}, {"intercity_type", P::mode},
                {"earliest_leave_time", P::clock, false}}),
          tool("goto", profile, ToolOp::inner_city_route, PoiKind::innercity_transit,
               {{"city", P::city}, {"start", P::text}, {"end", P::text}, {"start_time", P::clock},
                {"transport_type", P::mode}}),
      };
  }
  throw UsageError("unknown profile");
}

inline const std::vector<ToolSpec>& all_tools() {
  static const std::vector<ToolSpec> tools = [] {
    std::vector<ToolSpec> out;
    for (auto p : {Profile::tp_like, Profile::tc_like, Profile::ct_like}) {
      auto v = register_profile(p);
      out.insert(out.end(), v.begin(), v.end());
    }
    return out;
  }();
  return tools;
}

/// Looks a tool up by normalized name, or by its report display name.
inline const ToolSpec* find_tool(std::string_view name) {
  const auto key = normalize_tool_name(name);
  for (const auto& t : all_tools())
    if (normalize_tool_name(t.name) == key) return &t;
  for (const auto& t : all_tools())
    if (normalize_tool_name(display_name(t.name)) == key) return &t;
  return nullptr;
}

inline json to_json(const ToolSpec& t) {
  json params = json::array();
  for (const auto& p : t.params)
    params.push_back(json{{"name", p.name}, {"type", to_string(p.type)}, {"required", p.required}});
  return json{{"name", t.name},
              {"profile", to_string(t.profile)},
              {"result_kind", t.result == ResultKind::distance_rows ? std::string("distance_row") : std::string(to_string(t.kind))},
              {"params", params}};
}

/// Registry manifest: every profile's tool list.
inline json registry_manifest() {
  json profiles = json::object();
  for (auto p : {Profile::tp_like, Profile::tc_like, Profile::ct_like}) {
    json list = json::array();
    for (const auto& t : register_profile(p)) list.push_back(to_json(t));
    profiles[std::string(to_string(p))] = list;
  }
  return json{{"format", kFormatVersion}, {"normalizer_version", kNormalizerVersion}, {"profiles", profiles}};
}

}  // namespace tripdiag::sandbox
