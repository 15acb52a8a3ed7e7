// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "tripdiag/core/catalog.hpp"

namespace fixtures {

using namespace tripdiag;

inline Date day(const char* iso) { return Date::parse(iso); }

inline PoiRecord flight(std::string id, std::string from, std::string to, const char* depart, Money price,
                        int minutes = 120) {
  PoiRecord r;
  r.id = std::move(id);
  r.kind = PoiKind::flight;
  r.city = from;
  r.name = "Flight " + r.id;
  r.origin = std::move(from);
  r.destination = std::move(to);
  r.price = price;
  r.depart = Timestamp::parse(depart);
  r.arrive = Timestamp{r.depart->date, r.depart->minute + minutes};
  r.duration_min = minutes;
  return r;
}

inline PoiRecord leg(std::string id, std::string from, std::string to, std::string mode, const char* depart, Money price) {
  PoiRecord r = flight(std::move(id), std::move(from), std::move(to), depart, price);
  r.kind = PoiKind::intercity_transit;
  r.mode = std::move(mode);
  r.name = r.mode + " " + r.id;
  return r;
}

inline PoiRecord hotel(std::string id, std::string city, Money price, std::string room_type = "entire home",
                       std::vector<std::string> rules = {}, int occupancy = 2, int rating_tenths = 40) {
  PoiRecord r;
  r.id = std::move(id);
  r.kind = PoiKind::accommodation;
  r.city = std::move(city);
  r.name = "Hotel " + r.id;
  r.price = price;
  r.room_type = std::move(room_type);
  std::sort(rules.begin(), rules.end());
  r.house_rules = std::move(rules);
  r.max_occupancy = occupancy;
  r.rating = Fixed1{rating_tenths};
  return r;
}

inline PoiRecord restaurant(std::string id, std::string city, Money price, std::vector<std::string> cuisines = {},
                            int rating_tenths = 40) {
  PoiRecord r;
  r.id = std::move(id);
  r.kind = PoiKind::restaurant;
  r.city = std::move(city);
  r.name = "Restaurant " + r.id;
  r.price = price;
  std::sort(cuisines.begin(), cuisines.end());
  r.cuisines = std::move(cuisines);
  r.rating = Fixed1{rating_tenths};
  return r;
}

inline PoiRecord attraction(std::string id, std::string city, Money price, int rating_tenths = 40) {
  PoiRecord r;
  r.id = std::move(id);
  r.kind = PoiKind::attraction;
  r.city = std::move(city);
  r.name = "Attraction " + r.id;
  r.price = price;
  r.rating = Fixed1{rating_tenths};
  return r;
}

inline PoiRecord at(PoiRecord r, int x, int y) {
  r.x_m = x;
  r.y_m = y;
  return r;
}

inline PoiRecord named(PoiRecord r, std::string name) {
  r.name = std::move(name);
  return r;
}

inline ActivityItem item(PoiKind kind, std::string id, int quantity = 1) {
  ActivityItem it;
  it.kind = kind;
  it.poi_id = std::move(id);
  it.quantity = quantity;
  return it;
}

inline Query query(std::string origin, std::vector<std::string> dests, const char* first_day, int days, int people = 1) {
  Query q;
  q.id = "q-test";
  q.origin = std::move(origin);
  q.destinations = std::move(dests);
  for (int i = 0; i < days; ++i) q.dates.push_back(day(first_day).plus(i));
  q.people = people;
  return q;
}

}  // namespace fixtures
