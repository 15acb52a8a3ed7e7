// SPDX-License-Identifier: Apache-2.0
#pragma once

// Plan space shared by the search and the brute-force enumerator.
//
// A day skeleton assigns every day to one destination (destinations in
// query order, each visited for at least one day). Given a skeleton the
// plan is a fixed list of slots, each filled by exactly one catalog record:
//   transit   outbound on day 0, one transfer on each day the city changes,
//             return on the last day
//   lodging   one per night (every day but the last) in that day's city
//   meals     per day, in that day's city
//   visits    attractions per day, in that day's city, never repeated

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "tripdiag/core/catalog.hpp"
#include "tripdiag/core/rng.hpp"
#include "tripdiag/dsl/evaluate.hpp"

namespace tripdiag::solver {

struct SlotPolicy {
  int meals_per_day = 3;        // 1: dinner, 2: lunch + dinner, 3: all three
  int attractions_per_day = 1;
  bool lodging = true;

  friend bool operator==(const SlotPolicy&, const SlotPolicy&) = default;
};

inline SlotPolicy default_policy(Profile p) {
  switch (p) {
    case Profile::tp_like: return {3, 1, true};
    case Profile::tc_like: return {3, 1, true};
    case Profile::ct_like: return {2, 2, true};
  }
  return {};
}

inline json to_json(const SlotPolicy& p) {
  return json{{"meals_per_day", p.meals_per_day}, {"attractions_per_day", p.attractions_per_day}, {"lodging", p.lodging}};
}

inline SlotPolicy policy_from_json(const json& j, SlotPolicy base = {}) {
  base.meals_per_day = j.value("meals_per_day", base.meals_per_day);
  base.attractions_per_day = j.value("attractions_per_day", base.attractions_per_day);
  base.lodging = j.value("lodging", base.lodging);
  if (base.meals_per_day < 0 || base.meals_per_day > 3) throw DataError("meals_per_day must be in [0, 3]");
  if (base.attractions_per_day < 0) throw DataError("attractions_per_day must be >= 0");
  return base;
}

/// Destination index per day.
using Skeleton = std::vector<std::size_t>;

/// All compositions of the trip into consecutive destination blocks, in
/// lexicographic order of block lengths.
inline std::vector<Skeleton> day_skeletons(std::size_t days, std::size_t destinations) {
  std::vector<Skeleton> out;
  if (destinations == 0 || days < destinations) return out;
  std::vector<std::size_t> extra(destinations, 0);  // days beyond the first, per destination
  auto rec = [&](auto&& self, std::size_t k, std::size_t left) -> void {
    if (k + 1 == destinations) {
      extra[k] = left;
      Skeleton sk;
      for (std::size_t c = 0; c < destinations; ++c) sk.insert(sk.end(), 1 + extra[c], c);
      out.push_back(std::move(sk));
      return;
    }
    for (std::size_t e = 0; e <= left; ++e) {
      extra[k] = e;
      self(self, k + 1, left - e);
    }
  };
  rec(rec, 0, days - destinations);
  return out;
}

enum class SlotRole : std::uint8_t { outbound, transfer, ret, lodging, meal, visit };

struct Slot {
  SlotRole role = SlotRole::visit;
  PoiKind kind = PoiKind::attraction;
  std::size_t day = 0;
  std::string city;  // stay/activity city, or leg destination
  std::string from;  // legs only
  std::optional<MealSlot> meal;
  int quantity = 1;
  std::optional<std::size_t> prev_leg_same_day;  // slot index
  std::vector<const PoiRecord*> candidates;
};

inline bool is_leg(SlotRole r) { return r == SlotRole::outbound || r == SlotRole::transfer || r == SlotRole::ret; }

inline std::vector<MealSlot> meal_slots(int per_day) {
  switch (per_day) {
    case 0: return {};
    case 1: return {MealSlot::dinner};
    case 2: return {MealSlot::lunch, MealSlot::dinner};
    default: return {MealSlot::breakfast, MealSlot::lunch, MealSlot::dinner};
  }
}

inline int rooms_needed(const PoiRecord& r, int people) {
  const int occ = r.max_occupancy.value_or(people);
  return std::max(1, (people + occ - 1) / occ);
}

/// Price of filling `slot` with `r`.
inline Money slot_cost(const Slot& slot, const PoiRecord& r, int people) {
  return r.price * (slot.kind == PoiKind::accommodation ? rooms_needed(r, people) : slot.quantity);
}

namespace detail {

inline void order_candidates(std::vector<const PoiRecord*>& c) {
  std::sort(c.begin(), c.end(), [](const PoiRecord* a, const PoiRecord* b) {
    if (a->price != b->price) return a->price < b->price;
    return a->id < b->id;
  });
}

using tripdiag::portable_shuffle;

inline std::vector<const PoiRecord*> leg_candidates(const PoiCatalog& catalog, const std::string& from,
                                                    const std::string& to, Date date) {
  std::vector<const PoiRecord*> out;
  for (const auto& r : catalog.records()) {
    if (!is_intercity_leg(r.kind) || r.origin != from || r.destination != to) continue;
    if (r.depart && r.depart->date != date) continue;
    out.push_back(&r);
  }
  return out;
}

}  // namespace detail

/// Slots for one skeleton in search order: legs, lodging, meals, visits.
/// Candidates are ordered by (price, id), or shuffled when seed != 0.
inline std::vector<Slot> build_slots(const Query& q, const Skeleton& sk, const PoiCatalog& catalog, const SlotPolicy& policy,
                                     std::uint64_t seed = 0) {
  std::vector<Slot> slots;
  const std::size_t n = q.dates.size();
  auto city = [&](std::size_t d) { return q.destinations[sk[d]]; };

  auto add_leg = [&](SlotRole role, std::size_t day, std::string from, std::string to) {
    Slot s;
    s.role = role;
    s.kind = PoiKind::flight;
    s.day = day;
    s.from = std::move(from);
    s.city = std::move(to);
    s.quantity = q.people;
    s.candidates = detail::leg_candidates(catalog, s.from, s.city, q.dates[day]);
    for (std::size_t j = slots.size(); j-- > 0;)
      if (is_leg(slots[j].role) && slots[j].day == day) {
        s.prev_leg_same_day = j;
        break;
      }
    slots.push_back(std::move(s));
  };
  add_leg(SlotRole::outbound, 0, q.origin, city(0));
  for (std::size_t d = 1; d < n; ++d)
    if (sk[d] != sk[d - 1]) add_leg(SlotRole::transfer, d, city(d - 1), city(d));
  add_leg(SlotRole::ret, n - 1, city(n - 1), q.origin);

  auto add_stay = [&](SlotRole role, PoiKind kind, std::size_t day, std::optional<MealSlot> meal) {
    Slot s;
    s.role = role;
    s.kind = kind;
    s.day = day;
    s.city = city(day);
    s.meal = meal;
    s.quantity = q.people;
    s.candidates = catalog.in_city(kind, s.city);
    slots.push_back(std::move(s));
  };
  if (policy.lodging)
    for (std::size_t d = 0; d + 1 < n; ++d) add_stay(SlotRole::lodging, PoiKind::accommodation, d, std::nullopt);
  for (std::size_t d = 0; d < n; ++d)
    for (auto m : meal_slots(policy.meals_per_day)) add_stay(SlotRole::meal, PoiKind::restaurant, d, m);
  for (std::size_t d = 0; d < n; ++d)
    for (int a = 0; a < policy.attractions_per_day; ++a) add_stay(SlotRole::visit, PoiKind::attraction, d, std::nullopt);

  std::mt19937_64 rng(seed);
  for (auto& s : slots) {
    detail::order_candidates(s.candidates);
    if (seed != 0) detail::portable_shuffle(s.candidates, rng);
  }
  return slots;
}

/// Structural admissibility of placing `r` in slot `i` given earlier choices:
/// visits never repeat, and same-day legs are chronological.
inline bool admissible(const std::vector<Slot>& slots, const std::vector<const PoiRecord*>& chosen, std::size_t i,
                       const PoiRecord& r) {
  const Slot& s = slots[i];
  if (s.role == SlotRole::visit) {
    for (std::size_t j = 0; j < i; ++j)
      if (slots[j].role == SlotRole::visit && chosen[j] == &r) return false;
  }
  if (s.prev_leg_same_day) {
    const PoiRecord* prev = chosen[*s.prev_leg_same_day];
    if (prev->arrive && r.depart && r.depart < prev->arrive) return false;
  }
  return true;
}

/// Builds the plan document for a full assignment. Each day lists incoming
/// legs, visits, meals, lodging, then the return leg.
inline Itinerary assemble(const Query& q, const std::vector<Slot>& slots, const std::vector<const PoiRecord*>& chosen,
                          int people) {
  Itinerary plan;
  plan.query_id = q.id;
  for (const auto& d : q.dates) plan.days.push_back(DayPlan{d, {}});
  auto emit = [&](std::size_t i) {
    const Slot& s = slots[i];
    const PoiRecord& r = *chosen[i];
    ActivityItem it;
    it.kind = r.kind;
    it.poi_id = r.id;
    it.unit_cost = r.price;
    it.quantity = s.kind == PoiKind::accommodation ? rooms_needed(r, people) : s.quantity;
    it.meal_slot = s.meal;
    plan.days[s.day].items.push_back(std::move(it));
  };
  for (std::size_t d = 0; d < q.dates.size(); ++d) {
    for (std::size_t i = 0; i < slots.size(); ++i)
      if (slots[i].day == d && (slots[i].role == SlotRole::outbound || slots[i].role == SlotRole::transfer)) emit(i);
    for (std::size_t i = 0; i < slots.size(); ++i)
      if (slots[i].day == d && slots[i].role == SlotRole::visit) emit(i);
    for (auto m : {MealSlot::breakfast, MealSlot::lunch, MealSlot::dinner})
      for (std::size_t i = 0; i < slots.size(); ++i)
        if (slots[i].day == d && slots[i].role == SlotRole::meal && slots[i].meal == m) emit(i);
    for (std::size_t i = 0; i < slots.size(); ++i)
      if (slots[i].day == d && slots[i].role == SlotRole::lodging) emit(i);
    for (std::size_t i = 0; i < slots.size(); ++i)
      if (slots[i].day == d && slots[i].role == SlotRole::ret) emit(i);
  }
  Money total = 0;
  for (const auto& day : plan.days)
    for (const auto& it : day.items) total += it.unit_cost * it.quantity;
  plan.total_cost = total;
  return plan;
}

}  // namespace tripdiag::solver
