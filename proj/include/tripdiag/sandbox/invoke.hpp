// SPDX-License-Identifier: Apache-2.0
#pragma once

// Tool execution over a catalog. Results are deterministic: flights and
// other timed legs by departure, lodgings by price, nearby restaurants by
// distance, everything else by id; id breaks every tie.

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tripdiag/core/catalog.hpp"
#include "tripdiag/dsl/evaluate.hpp"
#include "tripdiag/sandbox/filter.hpp"
#include "tripdiag/sandbox/registry.hpp"

namespace tripdiag::sandbox {

enum class ToolErrorKind : std::uint8_t { unknown_tool, bad_arguments, unknown_city, bad_filter };

inline constexpr auto kToolErrorNames = make_names(
    std::pair{ToolErrorKind::unknown_tool, "unknown_tool"}, std::pair{ToolErrorKind::bad_arguments, "bad_arguments"},
    std::pair{ToolErrorKind::unknown_city, "unknown_city"}, std::pair{ToolErrorKind::bad_filter, "bad_filter"});

inline std::string_view to_string(ToolErrorKind k) { return kToolErrorNames.name(k); }

struct ToolError {
  ToolErrorKind kind;
  std::string message;
};

struct ToolResult {
  std::vector<PoiRecord> records;
  std::optional<ToolError> error;

  bool ok() const { return !error.has_value(); }
};

/// Arguments bound to a tool's parameter list. Positional names ("0",
/// "arg0") bind by index; named arguments bind by normalized name.
struct BoundCall {
  const ToolSpec* spec = nullptr;
  std::map<std::string, json> values;  // parameter name -> value

  const json* get(const std::string& name) const {
    auto it = values.find(name);
    return it == values.end() ? nullptr : &it->second;
  }
};

namespace detail {

inline std::optional<std::size_t> positional_index(const std::string& name) {
  std::string_view s = name;
  if (s.starts_with("arg")) s.remove_prefix(3);
  if (s.empty() || s.size() > 3) return std::nullopt;
  std::size_t v = 0;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
    v = v * 10 + static_cast<std::size_t>(c - '0');
  }
  return v;
}

inline bool type_ok(ParamType t, const json& v) {
  switch (t) {
    case ParamType::integer: {
      auto n = number_value(v);
      return n && *n == std::floor(*n);
    }
    case ParamType::number: return number_value(v).has_value();
    case ParamType::date: return normalize_date(v).has_value();
    case ParamType::clock: return normalize_clock(v).has_value();
    case ParamType::date_range:
      return v.is_array() && v.size() == 2 && normalize_date(v[0]) && normalize_date(v[1]);
    default: return v.is_string();
  }
}

}  // namespace detail

/// Binds and type-checks a call's arguments. Returns the error on failure.
inline std::variant<BoundCall, ToolError> bind_call(const ToolCall& call) {
  BoundCall b;
  b.spec = find_tool(call.tool_name);
  if (!b.spec) return ToolError{ToolErrorKind::unknown_tool, "unknown tool '" + call.tool_name + "'"};
  const auto& params = b.spec->params;
  for (const auto& [name, value] : call.arguments) {
    const ParamSpec* p = b.spec->param(name);
    if (!p) {
      if (auto idx = detail::positional_index(name); idx && *idx < params.size()) p = &params[*idx];
    }
    if (!p) return ToolError{ToolErrorKind::bad_arguments, b.spec->name + ": unexpected argument '" + name + "'"};
    if (b.values.count(p->name)) return ToolError{ToolErrorKind::bad_arguments, b.spec->name + ": duplicate argument '" + p->name + "'"};
    if (!detail::type_ok(p->type, value))
      return ToolError{ToolErrorKind::bad_arguments,
                       b.spec->name + ": argument '" + p->name + "' is not a valid " + std::string(to_string(p->type))};
    b.values.emplace(p->name, value);
  }
  for (const auto& p : params)
    if (p.required && !b.values.count(p.name))
      return ToolError{ToolErrorKind::bad_arguments, b.spec->name + ": missing argument '" + p.name + "'"};
  return b;
}

namespace detail {

/// Catalog spelling of a city, matched case-insensitively.
inline std::optional<std::string> resolve_city(const PoiCatalog& catalog, const json& v) {
  const auto want = fold_text(v.get<std::string>());
  for (const auto& c : catalog.cities())
    if (fold_text(c) == want) return c;
  return std::nullopt;
}

inline bool by_depart(const PoiRecord& a, const PoiRecord& b) {
  if (a.depart != b.depart) return a.depart < b.depart;
  return a.id < b.id;
}

inline bool by_price(const PoiRecord& a, const PoiRecord& b) {
  if (a.price != b.price) return a.price < b.price;
  return a.id < b.id;
}

inline bool ref_matches(const PoiCatalog& catalog, const std::string& poi_id, const std::string& ref) {
  if (fold_text(poi_id) == fold_text(ref)) return true;
  const auto* r = catalog.find(poi_id);
  return r && fold_text(r->name) == fold_text(ref);
}

inline std::vector<PoiRecord> copy_records(const std::vector<const PoiRecord*>& v) {
  std::vector<PoiRecord> out;
  out.reserve(v.size());
  for (const auto* r : v) out.push_back(*r);
  return out;
}

}  // namespace detail

/// Executes a call. Never throws for bad input; failures come back as ToolError.
inline ToolResult invoke(const ToolCall& call, const PoiCatalog& catalog) {
  auto bound = bind_call(call);
  if (auto* e = std::get_if<ToolError>(&bound)) return {{}, *e};
  const auto& b = std::get<BoundCall>(bound);
  const ToolSpec& spec = *b.spec;

  std::map<std::string, std::string> cities;
  for (const auto& p : spec.params) {
    if (p.type != ParamType::city) continue;
    auto c = detail::resolve_city(catalog, *b.get(p.name));
    if (!c) return {{}, ToolError{ToolErrorKind::unknown_city, spec.name + ": unknown city '" + b.get(p.name)->get<std::string>() + "'"}};
    cities[p.name] = *c;
  }

  ToolResult out;
  auto& recs = out.records;
  switch (spec.op) {
    case ToolOp::flight_search: {
      const auto date = Date::parse(*normalize_date(*b.get("date")));
      for (const auto& r : catalog.records())
        if (r.kind == PoiKind::flight && r.origin == cities["origin"] && r.destination == cities["destination"] && r.depart &&
            r.depart->date == date)
          recs.push_back(r);
      std::sort(recs.begin(), recs.end(), detail::by_depart);
      break;
    }
    case ToolOp::city_listing:
      recs = detail::copy_records(catalog.in_city(spec.kind, cities["city"]));
      if (spec.kind == PoiKind::accommodation) std::sort(recs.begin(), recs.end(), detail::by_price);
      break;
    case ToolOp::event_search: {
      const auto& range = *b.get("dates");
      auto lo = Date::parse(*normalize_date(range[0]));
      auto hi = Date::parse(*normalize_date(range[1]));
      if (hi < lo) std::swap(lo, hi);
      for (const auto* r : catalog.in_city(PoiKind::event, cities["city"]))
        if (!r->event_date || (lo <= *r->event_date && *r->event_date <= hi)) recs.push_back(*r);
      std::stable_sort(recs.begin(), recs.end(),
                       [](const auto& a, const auto& c) { return a.event_date.value_or(Date{}) < c.event_date.value_or(Date{}); });
      break;
    }
    case ToolOp::distance_matrix: {
      const auto mode = normalize_mode(b.get("mode")->get<std::string>());
      for (const auto& r : catalog.records())
        if (r.kind == PoiKind::intercity_transit && r.origin == cities["origin"] && r.destination == cities["destination"] &&
            normalize_mode(dsl::effective_mode(r)) == mode)
          recs.push_back(r);
      break;
    }
    case ToolOp::filtered_select: {
      FilterPredicate f;
      try {
        f = parse_filter(b.get("key")->get<std::string>(), b.get("func")->get<std::string>());
      } catch (const Error& e) {
        return {{}, ToolError{ToolErrorKind::bad_filter, spec.name + ": " + e.what()}};
      }
      for (const auto* r : catalog.in_city(spec.kind, cities["city"]))
        if (f.accepts(*r)) recs.push_back(*r);
      if (spec.kind == PoiKind::accommodation) std::sort(recs.begin(), recs.end(), detail::by_price);
      break;
    }
    case ToolOp::nearby_restaurants: {
      const auto point = b.get("point")->get<std::string>();
      const PoiRecord* anchor = nullptr;
      for (const auto& r : catalog.records())
        if (r.city == cities["city"] && r.x_m && r.y_m && (fold_text(r.name) == fold_text(point) || r.id == point)) {
          anchor = &r;
          break;
        }
      if (!anchor) return {{}, ToolError{ToolErrorKind::bad_arguments, spec.name + ": unknown point '" + point + "'"}};
      const auto topk = static_cast<std::size_t>(std::max(0.0, *number_value(*b.get("topk"))));
      const double radius_m = *number_value(*b.get("dist")) * 1000.0;
      std::vector<std::pair<std::int64_t, const PoiRecord*>> hits;
      for (const auto* r : catalog.in_city(PoiKind::restaurant, cities["city"])) {
        if (!r->x_m || !r->y_m) continue;
        const std::int64_t dx = *r->x_m - *anchor->x_m, dy = *r->y_m - *anchor->y_m;
        const std::int64_t d2 = dx * dx + dy * dy;
        if (static_cast<double>(d2) <= radius_m * radius_m) hits.emplace_back(d2, r);
      }
      std::sort(hits.begin(), hits.end(), [](const auto& x, const auto& y) {
        return x.first != y.first ? x.first < y.first : x.second->id < y.second->id;
      });
      for (std::size_t i = 0; i < hits.size() && i < topk; ++i) recs.push_back(*hits[i].second);
      break;
    }
    case ToolOp::intercity_select: {
      const auto mode = normalize_mode(b.get("intercity_type")->get<std::string>());
      std::optional<int> earliest;
      if (const auto* t = b.get("earliest_leave_time")) earliest = parse_clock(*normalize_clock(*t));
      for (const auto& r : catalog.records()) {
        if (!is_intercity_leg(r.kind) || r.origin != cities["start_city"] || r.destination != cities["end_city"]) continue;
        if (normalize_mode(dsl::effective_mode(r)) != mode) continue;
        if (earliest && (!r.depart || r.depart->minute < *earliest)) continue;
        recs.push_back(r);
      }
      std::sort(recs.begin(), recs.end(), detail::by_depart);
      break;
    }
    case ToolOp::inner_city_route: {
      // Inner-city legs are durations without a timetable; start_time is
      // validated but does not narrow the result.
      const auto mode = normalize_mode(b.get("transport_type")->get<std::string>());
      const auto from = b.get("start")->get<std::string>();
      const auto to = b.get("end")->get<std::string>();
      for (const auto* r : catalog.in_city(PoiKind::innercity_transit, cities["city"]))
        if (normalize_mode(r->mode) == mode && detail::ref_matches(catalog, r->from_poi, from) &&
            detail::ref_matches(catalog, r->to_poi, to))
          recs.push_back(*r);
      break;
    }
  }
  return out;
}

}  // namespace tripdiag::sandbox
