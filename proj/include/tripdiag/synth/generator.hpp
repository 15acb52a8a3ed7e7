// SPDX-License-Identifier: Apache-2.0
#pragma once

// Deterministic benchmark-shaped catalogs and annotated queries. Names come
// from fixed word lists and ids are sequential per kind, so fixtures read
// well and sort stably. Every emitted query comes with a reference plan the
// solver found, and its gold constraints are read off that plan.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tripdiag/core/rng.hpp"
#include "tripdiag/core/serialize.hpp"
#include "tripdiag/dsl.hpp"
#include "tripdiag/solver.hpp"

namespace tripdiag::synth {

/// Inclusive bounds; lo == hi is allowed and yields a constant.
struct Range {
  int lo = 0;
  int hi = 0;
};

struct GenSpec {
  std::uint64_t seed = 1;
  Profile profile = Profile::tp_like;
  int cities = 4;
  int hotels_per_city = 10;
  int restaurants_per_city = 12;
  int attractions_per_city = 10;
  int events_per_city = 2;
  int legs_per_route_per_day = 2;
  int innercity_legs_per_city = 0;
  // Prices in major currency units; ratings in tenths.
  Range flight_price{80, 600};
  Range train_price{20, 150};
  Range hotel_price{50, 400};
  Range restaurant_price{8, 80};
  Range attraction_price{0, 60};
  Range event_price{20, 150};
  Range rating{20, 50};
  std::string first_date = "2024-03-01";
  int window_days = 10;
  int queries = 8;
  Range trip_days{2, 3};
  Range people{1, 4};
  int max_destinations = 2;
  std::uint64_t search_budget = 200000;

  void check() const {
    const auto pos = [](int v, const char* what) {
      if (v < 1) throw UsageError(std::string(what) + " must be at least 1");
    };
    pos(cities, "cities");
    pos(hotels_per_city, "hotels per city");
    pos(restaurants_per_city, "restaurants per city");
    pos(attractions_per_city, "attractions per city");
    pos(legs_per_route_per_day, "legs per route per day");
    pos(window_days, "window days");
    pos(max_destinations, "max destinations");
    if (events_per_city < 0 || innercity_legs_per_city < 0 || queries < 0) throw UsageError("counts must not be negative");
    if (cities < 2) throw UsageError("at least two cities are needed for a trip");
    for (const auto* r : {&flight_price, &train_price, &hotel_price, &restaurant_price, &attraction_price, &event_price,
                          &rating, &trip_days, &people})
      if (r->lo > r->hi || r->lo < 0) throw UsageError("range bounds must satisfy 0 <= lo <= hi");
    if (rating.hi > 50) throw UsageError("ratings are at most 5.0");
    if (trip_days.lo < 1 || people.lo < 1) throw UsageError("trips need at least one day and one traveller");
    if (trip_days.hi > window_days) throw UsageError("trips cannot be longer than the date window");
    Date::parse(first_date);
  }
};

inline json to_json(const Range& r) { return json::array({r.lo, r.hi}); }

inline json to_json(const GenSpec& s) {
  return json{{"seed", s.seed},
              {"profile", to_string(s.profile)},
              {"cities", s.cities},
              {"hotels_per_city", s.hotels_per_city},
              {"restaurants_per_city", s.restaurants_per_city},
              {"attractions_per_city", s.attractions_per_city},
              {"events_per_city", s.events_per_city},
              {"legs_per_route_per_day", s.legs_per_route_per_day},
              {"innercity_legs_per_city", s.innercity_legs_per_city},
              {"flight_price", to_json(s.flight_price)},
              {"train_price", to_json(s.train_price)},
              {"hotel_price", to_json(s.hotel_price)},
              {"restaurant_price", to_json(s.restaurant_price)},
              {"attraction_price", to_json(s.attraction_price)},
              {"event_price", to_json(s.event_price)},
              {"rating", to_json(s.rating)},
              {"first_date", s.first_date},
              {"window_days", s.window_days},
              {"queries", s.queries},
              {"trip_days", to_json(s.trip_days)},
              {"people", to_json(s.people)},
              {"max_destinations", s.max_destinations},
              {"search_budget", s.search_budget}};
}

inline GenSpec gen_spec_from_json(const json& j, GenSpec s = {}) {
  auto num = [&](const char* k, auto& v) {
    if (auto it = j.find(k); it != j.end()) v = it->get<std::decay_t<decltype(v)>>();
  };
  auto range = [&](const char* k, Range& r) {
    if (auto it = j.find(k); it != j.end()) {
      if (!it->is_array() || it->size() != 2) throw DataError(std::string("'") + k + "' must be [lo, hi]");
      r = {(*it)[0].get<int>(), (*it)[1].get<int>()};
    }
  };
  num("seed", s.seed);
  if (auto it = j.find("profile"); it != j.end()) s.profile = kProfileNames.parse(it->get<std::string>(), "profile");
  num("cities", s.cities);
  num("hotels_per_city", s.hotels_per_city);
  num("restaurants_per_city", s.restaurants_per_city);
  num("attractions_per_city", s.attractions_per_city);
  num("events_per_city", s.events_per_city);
  num("legs_per_route_per_day", s.legs_per_route_per_day);
  num("innercity_legs_per_city", s.innercity_legs_per_city);
  range("flight_price", s.flight_price);
  range("train_price", s.train_price);
  range("hotel_price", s.hotel_price);
  range("restaurant_price", s.restaurant_price);
  range("attraction_price", s.attraction_price);
  range("event_price", s.event_price);
  range("rating", s.rating);
  num("first_date", s.first_date);
  num("window_days", s.window_days);
  num("queries", s.queries);
  range("trip_days", s.trip_days);
  range("people", s.people);
  num("max_destinations", s.max_destinations);
  num("search_budget", s.search_budget);
  s.check();
  return s;
}

namespace words {
inline const std::vector<std::string> kCities{"Ashford", "Belmont",  "Caldera", "Dunmore", "Elmstead", "Fairhaven",
                                              "Glenrock", "Harrow", "Ironvale", "Juniper", "Kestrel", "Larkspur",
                                              "Marlowe", "Northgate", "Oakridge", "Pinecrest"};
inline const std::vector<std::string> kAdjectives{"Amber", "Blue",  "Cedar",  "Golden", "Harbor", "Ivy",
                                                  "Maple", "Quiet", "Silver", "Sunny",  "Velvet", "Willow"};
inline const std::vector<std::string> kHotelNouns{"Inn", "Lodge", "Suites", "House", "Loft", "Retreat"};
inline const std::vector<std::string> kFoodNouns{"Kitchen", "Table", "Bistro", "Grill", "Cafe", "Noodle Bar"};
inline const std::vector<std::string> kSightNouns{"Museum", "Garden", "Tower", "Gallery", "Park", "Market", "Bridge"};
inline const std::vector<std::string> kEventNouns{"Festival", "Concert", "Fair", "Parade"};
inline const std::vector<std::string> kCuisines{"american", "bakery", "chinese", "french", "indian",
                                                "italian",  "mexican", "seafood", "thai"};
inline const std::vector<std::string> kRooms{"entire home", "private room", "shared room"};
inline const std::vector<std::string> kRules{"no children under 10", "no parties", "no pets", "no smoking",
                                             "no visitors"};
inline const std::vector<std::string> kLocalModes{"metro", "taxi", "walk"};
}  // namespace words

struct GeneratedQuery {
  AnnotatedQuery annotated;
  Itinerary reference;  // satisfies every gold constraint
};

struct Generated {
  PoiCatalog catalog;
  std::vector<GeneratedQuery> queries;
  std::size_t rejected_draws = 0;  // query draws dropped for lack of a plan
};

namespace detail {

inline Money price(Rng& rng, const Range& r) { return static_cast<Money>(rng.between(r.lo, r.hi)) * 100; }

inline std::string serial(const char* prefix, int n) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s-%04d", prefix, n);
  return buf;
}

inline std::string title(Rng& rng, const std::vector<std::string>& nouns) {
  return rng.pick(words::kAdjectives) + " " + rng.pick(nouns);
}

inline std::vector<std::string> some_of(Rng& rng, const std::vector<std::string>& pool, int lo, int hi) {
  std::vector<std::string> v = pool;
  rng.shuffle(v);
  v.resize(static_cast<std::size_t>(rng.between(lo, hi)));
  std::sort(v.begin(), v.end());
  return v;
}

inline PoiCatalog make_catalog(const GenSpec& spec, Rng& rng, const std::vector<std::string>& cities) {
  std::vector<PoiRecord> recs;
  int n_flight = 0, n_train = 0, n_hotel = 0, n_rest = 0, n_sight = 0, n_event = 0, n_local = 0;
  const Date first = Date::parse(spec.first_date);
  const bool rail = spec.profile == Profile::ct_like;
  for (int d = 0; d < spec.window_days; ++d)
    for (const auto& a : cities)
      for (const auto& b : cities) {
        if (a == b) continue;
        for (int k = 0; k < spec.legs_per_route_per_day; ++k) {
          PoiRecord r;
          const bool train = rail || (spec.profile == Profile::tp_like && k % 2 == 1);
          r.kind = train ? PoiKind::intercity_transit : PoiKind::flight;
          r.id = train ? serial("tr", ++n_train) : serial("fl", ++n_flight);
          r.city = r.origin = a;
          r.destination = b;
          if (train) r.mode = rail ? (k % 2 ? "bus" : "train") : "self-driving";
          r.name = train ? r.mode + " " + a + " to " + b : "Flight " + r.id;
          r.price = price(rng, train ? spec.train_price : spec.flight_price);
          const int minute = 6 * 60 + 30 * rng.between(0, 26);
          const int duration = 60 + 15 * rng.between(0, 12);
          r.depart = Timestamp{first.plus(d), minute};
          r.arrive = Timestamp{first.plus(d), minute + duration};
          r.duration_min = duration;
          recs.push_back(std::move(r));
        }
      }
  for (std::size_t ci = 0; ci < cities.size(); ++ci) {
    const auto& c = cities[ci];
    auto place = [&](PoiRecord& r) {
      r.x_m = static_cast<int>(ci) * 100000 + rng.between(0, 20000);
      r.y_m = rng.between(0, 20000);
    };
    for (int i = 0; i < spec.hotels_per_city; ++i) {
      PoiRecord r;
      r.kind = PoiKind::accommodation;
      r.id = serial("ac", ++n_hotel);
      r.city = c;
      r.name = title(rng, words::kHotelNouns);
      r.price = price(rng, spec.hotel_price);
      r.rating = Fixed1{rng.between(spec.rating.lo, spec.rating.hi)};
      r.room_type = rng.pick(words::kRooms);
      r.house_rules = some_of(rng, words::kRules, 0, 2);
      r.max_occupancy = rng.between(1, 6);
      place(r);
      recs.push_back(std::move(r));
    }
    for (int i = 0; i < spec.restaurants_per_city; ++i) {
      PoiRecord r;
      r.kind = PoiKind::restaurant;
      r.id = serial("re", ++n_rest);
      r.city = c;
      r.name = title(rng, words::kFoodNouns);
      r.price = price(rng, spec.restaurant_price);
      r.rating = Fixed1{rng.between(spec.rating.lo, spec.rating.hi)};
      r.cuisines = some_of(rng, words::kCuisines, 1, 3);
      place(r);
      recs.push_back(std::move(r));
    }
    for (int i = 0; i < spec.attractions_per_city; ++i) {
      PoiRecord r;
      r.kind = PoiKind::attraction;
      r.id = serial("at", ++n_sight);
      r.city = c;
      r.name = c + " " + rng.pick(words::kSightNouns) + " " + std::to_string(i + 1);
      r.price = price(rng, spec.attraction_price);
      r.rating = Fixed1{rng.between(spec.rating.lo, spec.rating.hi)};
      place(r);
      recs.push_back(std::move(r));
    }
    for (int i = 0; i < spec.events_per_city; ++i) {
      PoiRecord r;
      r.kind = PoiKind::event;
      r.id = serial("ev", ++n_event);
      r.city = c;
      r.name = title(rng, words::kEventNouns);
      r.price = price(rng, spec.event_price);
      r.event_date = first.plus(rng.between(0, spec.window_days - 1));
      recs.push_back(std::move(r));
    }
  }
  // Inner-city legs between consecutive attractions of each city.
  for (const auto& c : cities) {
    std::vector<const PoiRecord*> sights;
    for (const auto& r : recs)
      if (r.kind == PoiKind::attraction && r.city == c) sights.push_back(&r);
    std::vector<PoiRecord> legs;
    for (int i = 0; i < spec.innercity_legs_per_city && sights.size() > 1; ++i) {
      const auto* a = sights[static_cast<std::size_t>(i) % sights.size()];
      const auto* b = sights[(static_cast<std::size_t>(i) + 1) % sights.size()];
      PoiRecord r;
      r.kind = PoiKind::innercity_transit;
      r.id = serial("lc", ++n_local);
      r.city = r.origin = r.destination = c;
      r.mode = words::kLocalModes[static_cast<std::size_t>(i / static_cast<int>(sights.size())) % 3];
      r.from_poi = a->id;
      r.to_poi = b->id;
      r.name = r.mode + " " + a->name + " to " + b->name;
      r.duration_min = 5 + rng.between(0, 40);
      r.price = r.mode == "walk" ? 0 : static_cast<Money>(rng.between(2, 30)) * 100;
      legs.push_back(std::move(r));
    }
    recs.insert(recs.end(), legs.begin(), legs.end());
  }
  for (const auto& r : recs) check_record(r);
  return PoiCatalog(std::move(recs));
}

inline std::string quote(const std::string& s) { return "'" + s + "'"; }

/// Gold constraints the reference plan satisfies: trip shape plus a random
/// selection of budget, lodging, cuisine and transport requirements.
inline std::vector<std::string> derive_constraints(Rng& rng, const Query& q, const Itinerary& ref,
                                                   const PoiCatalog& catalog) {
  std::vector<std::string> out{"days(plan) == " + std::to_string(q.dates.size()),
                               "people_number(plan) == " + std::to_string(q.people)};
  std::set<std::string> rooms, rules, cuisines, modes;
  for (const auto& d : ref.days)
    for (const auto& it : d.items)
      if (const auto* r = catalog.find(it.poi_id)) {
        if (r->room_type) rooms.insert(*r->room_type);
        rules.insert(r->house_rules.begin(), r->house_rules.end());
        cuisines.insert(r->cuisines.begin(), r->cuisines.end());
        if (r->kind == PoiKind::flight || r->kind == PoiKind::intercity_transit) modes.insert(dsl::effective_mode(*r));
      }
  std::vector<std::string> optional;
  const Money slack = ref.total_cost / 100 * rng.between(5, 30);
  optional.push_back("total_budget(plan) <= " + std::to_string((ref.total_cost + slack + 9999) / 10000 * 10000));
  if (rooms.size() == 1) optional.push_back(quote(*rooms.begin()) + " in room_types(plan)");
  for (const auto& rule : words::kRules)
    if (!rules.count(rule)) {
      optional.push_back(quote(rule) + " not in house_rules(plan)");
      break;
    }
  if (!cuisines.empty()) {
    std::vector<std::string> v(cuisines.begin(), cuisines.end());
    optional.push_back(quote(rng.pick(v)) + " in cuisines(plan)");
  }
  std::set<std::string> offered;
  for (const auto& r : catalog.records())
    if (r.kind == PoiKind::flight || r.kind == PoiKind::intercity_transit) offered.insert(dsl::effective_mode(r));
  for (const auto& m : offered)
    if (!modes.count(m)) {
      optional.push_back(quote(m) + " not in transport_modes(plan)");
      break;
    }
  rng.shuffle(optional);
  optional.resize(std::min<std::size_t>(optional.size(), static_cast<std::size_t>(rng.between(2, 4))));
  std::sort(optional.begin(), optional.end());
  out.insert(out.end(), optional.begin(), optional.end());
  return out;
}

inline std::string money_text(Money m) { return "$" + std::to_string(m / 100); }

/// A plain-language request covering every gold constraint.
inline std::string render_query_text(const Query& q, const std::vector<std::string>& constraints) {
  std::string dests;
  for (std::size_t i = 0; i < q.destinations.size(); ++i)
    dests += (i == 0 ? "" : i + 1 == q.destinations.size() ? " and then " : ", ") + q.destinations[i];
  std::string text = "Please plan a " + std::to_string(q.dates.size()) + "-day trip for " + std::to_string(q.people) +
                     (q.people == 1 ? " person" : " people") + " from " + q.origin + " to " + dests + ", from " +
                     q.dates.front().str() + " to " + q.dates.back().str() + ".";
  for (const auto& c : constraints) {
    const auto e = dsl::parse(c);
    if (e.kind == dsl::NodeKind::compare && e.lhs().kind == dsl::NodeKind::accessor &&
        e.lhs().head == dsl::Head::total_budget)
      text += " The whole trip should cost at most " + money_text(std::get<std::int64_t>(e.rhs().value)) + ".";
    if (e.kind != dsl::NodeKind::membership) continue;
    const auto& tag = std::get<std::string>(e.lhs().value);
    switch (e.rhs().head) {
      case dsl::Head::room_types: text += " We would like to stay in a " + tag + "."; break;
      case dsl::Head::house_rules: text += " The lodging must not have the rule '" + tag + "'."; break;
      case dsl::Head::cuisines: text += " We want to try " + tag + " food at least once."; break;
      case dsl::Head::transport_modes: text += " Please do not use " + tag + " transport."; break;
      default: break;
    }
  }
  return text;
}

}  // namespace detail

/// Catalog plus annotated queries, each with a verified reference plan.
/// Query draws with no plan within the search budget are dropped and
/// counted, up to 20 draws per requested query.
inline Generated generate(const GenSpec& spec) {
  spec.check();
  Rng rng(spec.seed);
  std::vector<std::string> cities = words::kCities;
  if (static_cast<std::size_t>(spec.cities) > cities.size()) throw UsageError("at most 16 cities are available");
  cities.resize(static_cast<std::size_t>(spec.cities));
  Generated g;
  g.catalog = detail::make_catalog(spec, rng, cities);
  const Date first = Date::parse(spec.first_date);
  const auto policy = solver::default_policy(spec.profile);
  int serial = 0;
  for (int attempt = 0; static_cast<int>(g.queries.size()) < spec.queries && attempt < 20 * spec.queries; ++attempt) {
    Query q;
    q.profile = spec.profile;
    std::vector<std::string> order = cities;
    rng.shuffle(order);
    q.origin = order[0];
    const int days = rng.between(spec.trip_days.lo, spec.trip_days.hi);
    const int max_dest = std::min({spec.max_destinations, days, static_cast<int>(cities.size()) - 1});
    const int dests = rng.between(1, max_dest);
    q.destinations.assign(order.begin() + 1, order.begin() + 1 + dests);
    const int start = rng.between(0, spec.window_days - days);
    for (int i = 0; i < days; ++i) q.dates.push_back(first.plus(start + i));
    q.people = rng.between(spec.people.lo, spec.people.hi);
    q.id = detail::serial("q", ++serial);

    solver::SolveRequest req;
    req.query = q;
    req.constraints = {dsl::parse("days(plan) == " + std::to_string(days)),
                       dsl::parse("people_number(plan) == " + std::to_string(q.people))};
    req.search_budget = spec.search_budget;
    req.seed = rng.between(std::int64_t{1}, std::int64_t{1} << 40);
    req.policy = policy;
    auto out = solver::solve(req, g.catalog);
    if (!out.plan) {
      ++g.rejected_draws;
      continue;
    }
    auto constraints = detail::derive_constraints(rng, q, *out.plan, g.catalog);
    q.text = detail::render_query_text(q, constraints);
    std::vector<dsl::Expr> parsed;
    for (const auto& c : constraints) parsed.push_back(dsl::parse(c));
    out.plan->query_id = q.id;
    if (!solver::verify(*out.plan, parsed, g.catalog, q).empty())
      throw Error("generated reference plan does not satisfy its own constraints");
    g.queries.push_back({AnnotatedQuery{q, constraints}, *out.plan});
  }
  return g;
}

}  // namespace tripdiag::synth
