// SPDX-License-Identifier: Apache-2.0
#pragma once

// JSON encodings for the core model. Writers always emit `format: 1`;
// readers reject any other format value and accept its absence.

#include <algorithm>
#include <cmath>
#include <set>
#include <string>
#include <vector>

#include "tripdiag/core/error.hpp"
#include "tripdiag/core/model.hpp"

namespace tripdiag {

inline constexpr int kFormatVersion = 1;

namespace detail {

inline void check_format(const json& j, const char* what) {
  if (!j.is_object()) throw DataError(std::string(what) + ": expected a JSON object");
  if (auto it = j.find("format"); it != j.end() && *it != kFormatVersion)
    throw DataError(std::string(what) + ": unsupported format " + it->dump());
}

inline const json& require(const json& j, const char* key, const char* what) {
  auto it = j.find(key);
  if (it == j.end()) throw DataError(std::string(what) + ": missing field '" + key + "'");
  return *it;
}

inline std::vector<std::string> sorted_unique(std::vector<std::string> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

}  // namespace detail

inline json fixed_to_json(Fixed1 f) { return json(static_cast<double>(f.tenths) / 10.0); }

inline Fixed1 fixed_from_json(const json& j) {
  if (j.is_number_integer()) return Fixed1{j.get<std::int64_t>() * 10};
  if (j.is_number()) return Fixed1{std::llround(j.get<double>() * 10.0)};
  if (j.is_string()) return Fixed1{std::llround(std::stod(j.get<std::string>()) * 10.0)};
  throw DataError("expected a one-decimal number, got " + j.dump());
}

// ---- Query ---------------------------------------------------------------

inline json to_json(const Query& q) {
  json dates = json::array();
  for (const auto& d : q.dates) dates.push_back(d.str());
  return json{{"format", kFormatVersion},        {"id", q.id},         {"text", q.text},
              {"origin", q.origin},              {"destinations", q.destinations},
              {"dates", dates},                  {"people", q.people}, {"profile", to_string(q.profile)}};
}

inline Query query_from_json(const json& j) {
  detail::check_format(j, "query");
  Query q;
  q.id = detail::require(j, "id", "query").get<std::string>();
  q.text = j.value("text", "");
  q.origin = detail::require(j, "origin", "query").get<std::string>();
  q.destinations = detail::require(j, "destinations", "query").get<std::vector<std::string>>();
  for (const auto& d : detail::require(j, "dates", "query")) q.dates.push_back(Date::parse(d.get<std::string>()));
  q.people = j.value("people", 1);
  q.profile = kProfileNames.parse(j.value("profile", "TP-like"), "profile");
  if (q.destinations.empty()) throw DataError("query " + q.id + ": destinations must be non-empty");
  if (q.people < 1) throw DataError("query " + q.id + ": people must be >= 1");
  if (q.dates.empty()) throw DataError("query " + q.id + ": dates must be non-empty");
  for (std::size_t i = 1; i < q.dates.size(); ++i)
    if (!(q.dates[i - 1] < q.dates[i])) throw DataError("query " + q.id + ": dates must be strictly ascending");
  return q;
}

/// A query together with its gold constraint list (DSL strings).
struct AnnotatedQuery {
  Query query;
  std::vector<std::string> constraints;
};

inline json to_json(const AnnotatedQuery& a) {
  json j = to_json(a.query);
  j["constraints"] = a.constraints;
  return j;
}

inline AnnotatedQuery annotated_query_from_json(const json& j) {
  AnnotatedQuery a{query_from_json(j), {}};
  if (auto it = j.find("constraints"); it != j.end()) a.constraints = it->get<std::vector<std::string>>();
  return a;
}

// ---- PoiRecord -------------------------------------------------------------

inline json to_json(const PoiRecord& r) {
  json a = json::object();
  a["price"] = r.price;
  if (r.rating) a["rating"] = fixed_to_json(*r.rating);
  if (!r.cuisines.empty()) a["cuisines"] = r.cuisines;
  if (r.room_type) a["room_type"] = *r.room_type;
  if (!r.house_rules.empty()) a["house_rules"] = r.house_rules;
  if (r.max_occupancy) a["max_occupancy"] = *r.max_occupancy;
  if (!r.origin.empty()) a["origin"] = r.origin;
  if (!r.destination.empty()) a["destination"] = r.destination;
  if (!r.mode.empty()) a["mode"] = r.mode;
  if (r.depart) a["depart"] = r.depart->str();
  if (r.arrive) a["arrive"] = r.arrive->str();
  if (r.duration_min) a["duration_min"] = *r.duration_min;
  if (!r.from_poi.empty()) a["from_poi"] = r.from_poi;
  if (!r.to_poi.empty()) a["to_poi"] = r.to_poi;
  if (r.event_date) a["event_date"] = r.event_date->str();
  if (r.x_m) a["x_m"] = *r.x_m;
  if (r.y_m) a["y_m"] = *r.y_m;
  return json{{"format", kFormatVersion}, {"id", r.id},     {"kind", to_string(r.kind)},
              {"city", r.city},           {"name", r.name}, {"attributes", a}};
}

/// Throws DataError when the record breaks a catalog invariant.
inline void check_record(const PoiRecord& r) {
  const std::string who = "record " + r.id;
  if (r.id.empty()) throw DataError("record with empty id");
  if (r.price < 0) throw DataError(who + ": negative price");
  if (r.rating && (r.rating->tenths < 0 || r.rating->tenths > 50)) throw DataError(who + ": rating outside [0, 5]");
  if (r.max_occupancy && *r.max_occupancy < 1) throw DataError(who + ": max_occupancy must be >= 1");
  if (is_intercity_leg(r.kind)) {
    if (r.origin.empty() || r.destination.empty()) throw DataError(who + ": transit needs origin and destination");
    if (r.origin == r.destination) throw DataError(who + ": intercity origin equals destination");
  }
  if (r.kind == PoiKind::innercity_transit && (r.origin != r.destination || r.origin != r.city))
    throw DataError(who + ": innercity transit must stay inside its city");
}

inline PoiRecord poi_record_from_json(const json& j) {
  detail::check_format(j, "record");
  PoiRecord r;
  r.id = detail::require(j, "id", "record").get<std::string>();
  r.kind = kPoiKindNames.parse(detail::require(j, "kind", "record").get<std::string>(), "poi kind");
  r.city = j.value("city", "");
  r.name = j.value("name", "");
  const json a = j.value("attributes", json::object());
  r.price = a.value("price", Money{0});
  if (a.contains("rating")) r.rating = fixed_from_json(a["rating"]);
  if (a.contains("cuisines")) r.cuisines = detail::sorted_unique(a["cuisines"].get<std::vector<std::string>>());
  if (a.contains("room_type")) r.room_type = a["room_type"].get<std::string>();
  if (a.contains("house_rules"))
    r.house_rules = detail::sorted_unique(a["house_rules"].get<std::vector<std::string>>());
  if (a.contains("max_occupancy")) r.max_occupancy = a["max_occupancy"].get<int>();
  r.origin = a.value("origin", "");
  r.destination = a.value("destination", "");
  r.mode = a.value("mode", "");
  if (a.contains("depart")) r.depart = Timestamp::parse(a["depart"].get<std::string>());
  if (a.contains("arrive")) r.arrive = Timestamp::parse(a["arrive"].get<std::string>());
  if (a.contains("duration_min")) r.duration_min = a["duration_min"].get<int>();
  r.from_poi = a.value("from_poi", "");
  r.to_poi = a.value("to_poi", "");
  if (a.contains("event_date")) r.event_date = Date::parse(a["event_date"].get<std::string>());
  if (a.contains("x_m")) r.x_m = a["x_m"].get<int>();
  if (a.contains("y_m")) r.y_m = a["y_m"].get<int>();
  check_record(r);
  return r;
}

// ---- Itinerary ---------------------------------------------------------------

inline json to_json(const ActivityItem& it) {
  json j{{"kind", to_string(it.kind)}, {"poi_id", it.poi_id}, {"unit_cost", it.unit_cost}, {"quantity", it.quantity}};
  if (it.start) j["start"] = clock_str(*it.start);
  if (it.end) j["end"] = clock_str(*it.end);
  if (it.meal_slot) j["meal_slot"] = to_string(*it.meal_slot);
  return j;
}

inline json to_json(const Itinerary& p) {
  json days = json::array();
  for (const auto& d : p.days) {
    json items = json::array();
    for (const auto& it : d.items) items.push_back(to_json(it));
    days.push_back(json{{"date", d.date.str()}, {"items", items}});
  }
  return json{{"format", kFormatVersion}, {"query_id", p.query_id}, {"days", days}, {"total_cost", p.total_cost}};
}

// Plan decoding lives in schema.hpp: agent output must never throw.

// ---- Context, tool calls, findings --------------------------------------------

inline json to_json(const InformationContext& c) {
  return json{{"format", kFormatVersion}, {"case_id", c.case_id}, {"level", to_string(c.level)}, {"record_ids", c.records}};
}

inline InformationContext context_from_json(const json& j) {
  detail::check_format(j, "context");
  InformationContext c;
  c.case_id = j.value("case_id", "");
  c.level = kContextLevelNames.parse(detail::require(j, "level", "context").get<std::string>(), "context level");
  c.records = detail::sorted_unique(detail::require(j, "record_ids", "context").get<std::vector<std::string>>());
  return c;
}

inline json to_json(const ToolCall& call) {
  json args = json::object();
  for (const auto& [n, v] : call.arguments) args[n] = v;
  return json{{"tool_name", call.tool_name}, {"arguments", args}};
}

/// Accepts {"tool_name", "arguments"|"parameters": {...} | [[name, value], ...]}.
inline ToolCall tool_call_from_json(const json& j) {
  if (!j.is_object()) throw DataError("tool call: expected an object");
  ToolCall call;
  call.tool_name = detail::require(j, "tool_name", "tool call").get<std::string>();
  const json* args = nullptr;
  if (auto it = j.find("arguments"); it != j.end()) args = &*it;
  else if (auto it2 = j.find("parameters"); it2 != j.end()) args = &*it2;
  if (args && args->is_object()) {
    for (const auto& [k, v] : args->items()) call.arguments.emplace_back(k, v);
  } else if (args && args->is_array()) {
    std::set<std::string> seen;
    for (const auto& pair : *args) {
      if (!pair.is_array() || pair.size() != 2 || !pair[0].is_string())
        throw DataError("tool call: argument entries must be [name, value]");
      if (!seen.insert(pair[0].get<std::string>()).second)
        throw DataError("tool call: duplicate argument '" + pair[0].get<std::string>() + "'");
      call.arguments.emplace_back(pair[0].get<std::string>(), pair[1]);
    }
  } else if (args && !args->is_null()) {
    throw DataError("tool call: arguments must be an object or a list of pairs");
  }
  return call;
}

inline json to_json(const ErrorFinding& f) {
  json j{{"category", to_string(f.category)}};
  if (f.constraint) j["constraint"] = *f.constraint;
  if (f.locus) j["locus"] = json{{"day", f.locus->day}, {"item", f.locus->item}};
  if (!f.detail.empty()) j["detail"] = f.detail;
  return j;
}

inline ErrorFinding finding_from_json(const json& j) {
  if (!j.is_object()) throw DataError("finding: expected an object");
  ErrorFinding f;
  f.category = kFindingCategoryNames.parse(detail::require(j, "category", "finding").get<std::string>(), "category");
  if (auto it = j.find("constraint"); it != j.end() && !it->is_null()) f.constraint = it->get<std::string>();
  if (auto it = j.find("locus"); it != j.end() && it->is_object())
    f.locus = Locus{(*it).value("day", std::size_t{0}), (*it).value("item", std::size_t{0})};
  f.detail = j.value("detail", "");
  return f;
}

template <class T>
json to_json_array(const std::vector<T>& values) {
  json out = json::array();
  for (const auto& v : values) out.push_back(to_json(v));
  return out;
}

}  // namespace tripdiag
