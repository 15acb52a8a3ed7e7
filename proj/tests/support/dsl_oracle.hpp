// SPDX-License-Identifier: Apache-2.0
#pragma once

// Random well-typed constraints, random plans, and a reference evaluator
// written against the accessor definitions directly. The reference shares
// no code with tripdiag::dsl::Evaluator: plan quantities are recomputed
// item by item on every access, and undefined values are explicit.

#include <algorithm>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "tripdiag/core/catalog.hpp"
#include "tripdiag/core/rng.hpp"
#include "tripdiag/dsl.hpp"

namespace fixtures {

using namespace tripdiag;

// ---- reference evaluator ---------------------------------------------------------

struct RefValue {
  enum Tag { undefined, integer, fixed, text, set, boolean } tag = undefined;
  std::int64_t n = 0;  // integer, or tenths for fixed
  std::string s;
  std::vector<std::string> members;  // sorted, unique
  bool b = false;

  static RefValue none() { return {}; }
  static RefValue of_int(std::int64_t v) { return {integer, v, {}, {}, false}; }
  static RefValue of_fixed(std::int64_t tenths) { return {fixed, tenths, {}, {}, false}; }
  static RefValue of_text(std::string v) { return {text, 0, std::move(v), {}, false}; }
  static RefValue of_bool(bool v) { return {boolean, 0, {}, {}, v}; }
  static RefValue of_set(std::vector<std::string> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return {set, 0, {}, std::move(v), false};
  }
};

class ReferenceEvaluator {
public:
  ReferenceEvaluator(const Itinerary& plan, const PoiCatalog& catalog, int people)
      : plan_(plan), catalog_(catalog), people_(people) {}

  bool holds(const dsl::Expr& e) const { return truth(e, nullptr); }

private:
  // Record behind a plan item: same id and same kind, else nothing.
  const PoiRecord* record_of(const ActivityItem& it) const {
    for (const auto& r : catalog_.records())
      if (r.id == it.poi_id) return r.kind == it.kind ? &r : nullptr;
    return nullptr;
  }

  std::vector<std::pair<const ActivityItem*, const PoiRecord*>> items() const {
    std::vector<std::pair<const ActivityItem*, const PoiRecord*>> out;
    for (const auto& d : plan_.days)
      for (const auto& it : d.items) out.emplace_back(&it, record_of(it));
    return out;
  }

  static std::string mode_of(const PoiRecord& r) {
    if (!r.mode.empty()) return r.mode;
    if (r.kind == PoiKind::flight) return "flight";
    return {};
  }

  RefValue plan_value(const dsl::Expr& e) const {
    using dsl::Head;
    std::vector<std::string> acc;
    switch (e.head) {
      case Head::days: return RefValue::of_int(static_cast<std::int64_t>(plan_.days.size()));
      case Head::people_number: return RefValue::of_int(people_);
      case Head::total_budget:
      case Head::cost_of: {
        std::int64_t sum = 0;
        for (const auto& [it, r] : items()) {
          if (!r) continue;
          if (e.head == Head::cost_of && std::string(to_string(it->kind)) != e.arg) continue;
          sum += r->price * it->quantity;
        }
        return RefValue::of_int(sum);
      }
      case Head::room_types:
        for (const auto& [it, r] : items())
          if (r && r->room_type) acc.push_back(*r->room_type);
        return RefValue::of_set(acc);
      case Head::house_rules:
        for (const auto& [it, r] : items())
          if (r) acc.insert(acc.end(), r->house_rules.begin(), r->house_rules.end());
        return RefValue::of_set(acc);
      case Head::cuisines:
        for (const auto& [it, r] : items())
          if (r) acc.insert(acc.end(), r->cuisines.begin(), r->cuisines.end());
        return RefValue::of_set(acc);
      case Head::transport_modes:
        for (const auto& [it, r] : items())
          if (r && (r->kind == PoiKind::flight || r->kind == PoiKind::intercity_transit ||
                    r->kind == PoiKind::innercity_transit) && !mode_of(*r).empty())
            acc.push_back(mode_of(*r));
        return RefValue::of_set(acc);
      case Head::visited_cities:
        for (const auto& [it, r] : items())
          if (r && (r->kind == PoiKind::accommodation || r->kind == PoiKind::restaurant ||
                    r->kind == PoiKind::attraction || r->kind == PoiKind::event))
            acc.push_back(r->city);
        return RefValue::of_set(acc);
      case Head::rating_of: {
        const PoiRecord* hit = nullptr;
        for (const auto& r : catalog_.records())
          if (r.id == e.arg) hit = &r;
        if (!hit) {
          std::vector<const PoiRecord*> named;
          for (const auto& r : catalog_.records())
            if (r.name == e.arg) named.push_back(&r);
          std::sort(named.begin(), named.end(), [](auto* a, auto* b) { return a->id < b->id; });
          if (!named.empty()) hit = named.front();
        }
        if (!hit || !hit->rating) return RefValue::none();
        return RefValue::of_fixed(hit->rating->tenths);
      }
      case Head::poi_visited:
        for (const auto& [it, r] : items())
          if (r && (r->id == e.arg || r->name == e.arg)) return RefValue::of_bool(true);
        return RefValue::of_bool(false);
    }
    return RefValue::none();
  }

  static RefValue item_value(dsl::ItemField f, const PoiRecord* r) {
    using dsl::ItemField;
    if (!r) return RefValue::none();
    switch (f) {
      case ItemField::id: return RefValue::of_text(r->id);
      case ItemField::name: return RefValue::of_text(r->name);
      case ItemField::city: return RefValue::of_text(r->city);
      case ItemField::price: return RefValue::of_int(r->price);
      case ItemField::rating: return r->rating ? RefValue::of_fixed(r->rating->tenths) : RefValue::none();
      case ItemField::cuisines: return RefValue::of_set(r->cuisines);
      case ItemField::room_type: return r->room_type ? RefValue::of_text(*r->room_type) : RefValue::none();
      case ItemField::house_rules: return RefValue::of_set(r->house_rules);
      case ItemField::mode: return mode_of(*r).empty() ? RefValue::none() : RefValue::of_text(mode_of(*r));
      case ItemField::max_occupancy: return r->max_occupancy ? RefValue::of_int(*r->max_occupancy) : RefValue::none();
    }
    return RefValue::none();
  }

  RefValue eval(const dsl::Expr& e, const PoiRecord* item) const {
    using dsl::NodeKind;
    switch (e.kind) {
      case NodeKind::literal: {
        const auto& v = e.value;
        if (auto* i = std::get_if<std::int64_t>(&v)) return RefValue::of_int(*i);
        if (auto* f = std::get_if<Fixed1>(&v)) return RefValue::of_fixed(f->tenths);
        if (auto* s = std::get_if<std::string>(&v)) return RefValue::of_text(*s);
        if (auto* m = std::get_if<dsl::StringSet>(&v)) return RefValue::of_set(*m);
        return RefValue::of_bool(std::get<bool>(v));
      }
      case NodeKind::accessor: return plan_value(e);
      case NodeKind::item_field: return item_value(e.field, item);
      case NodeKind::arith: {
        const auto a = eval(e.children[0], item), b = eval(e.children[1], item);
        if (a.tag != RefValue::integer || b.tag != RefValue::integer) return RefValue::none();
        if (e.arith == dsl::ArithOp::add) return RefValue::of_int(a.n + b.n);
        if (e.arith == dsl::ArithOp::sub) return RefValue::of_int(a.n - b.n);
        return RefValue::of_int(a.n * b.n);
      }
      default: return RefValue::of_bool(truth(e, item));
    }
  }

  static bool ordered(dsl::CmpOp op, int sign) {
    switch (op) {
      case dsl::CmpOp::eq: return sign == 0;
      case dsl::CmpOp::ne: return sign != 0;
      case dsl::CmpOp::lt: return sign < 0;
      case dsl::CmpOp::le: return sign <= 0;
      case dsl::CmpOp::gt: return sign > 0;
      case dsl::CmpOp::ge: return sign >= 0;
    }
    return false;
  }

  static bool compare(dsl::CmpOp op, const RefValue& a, const RefValue& b) {
    if (a.tag == RefValue::undefined || b.tag == RefValue::undefined || a.tag != b.tag) return false;
    int sign = 0;
    switch (a.tag) {
      case RefValue::integer:
      case RefValue::fixed: sign = a.n < b.n ? -1 : (a.n > b.n ? 1 : 0); break;
      case RefValue::text: sign = a.s.compare(b.s) < 0 ? -1 : (a.s == b.s ? 0 : 1); break;
      case RefValue::set: sign = a.members < b.members ? -1 : (a.members == b.members ? 0 : 1); break;
      case RefValue::boolean: sign = a.b == b.b ? 0 : (a.b ? 1 : -1); break;
      default: return false;
    }
    return ordered(op, sign);
  }

  bool truth(const dsl::Expr& e, const PoiRecord* item) const {
    using dsl::NodeKind;
    switch (e.kind) {
      case NodeKind::literal:
      case NodeKind::accessor: {
        const auto v = eval(e, item);
        return v.tag == RefValue::boolean && v.b;
      }
      case NodeKind::compare: return compare(e.cmp, eval(e.children[0], item), eval(e.children[1], item));
      case NodeKind::membership: {
        const auto x = eval(e.children[0], item), s = eval(e.children[1], item);
        if (x.tag != RefValue::text || s.tag != RefValue::set) return false;
        const bool in = std::find(s.members.begin(), s.members.end(), x.s) != s.members.end();
        return e.negated != in;
      }
      case NodeKind::conjunction: {
        bool all = true;
        for (const auto& c : e.children) all = truth(c, item) && all;
        return all;
      }
      case NodeKind::disjunction: {
        bool any = false;
        for (const auto& c : e.children) any = truth(c, item) || any;
        return any;
      }
      case NodeKind::negation: return !truth(e.children[0], item);
      case NodeKind::result_wrap: return truth(e.children[0], item);
      case NodeKind::forall:
      case NodeKind::exists: {
        std::size_t seen = 0, held = 0;
        for (const auto& [it, r] : items()) {
          if (e.arg != "any" && std::string(to_string(it->kind)) != e.arg) continue;
          ++seen;
          held += truth(e.children[0], r) ? 1 : 0;
        }
        return e.kind == NodeKind::forall ? held == seen : held > 0;
      }
      default: return false;
    }
  }

  const Itinerary& plan_;
  const PoiCatalog& catalog_;
  int people_;
};

// ---- random material ---------------------------------------------------------------

/// Small catalog covering every kind, with gaps (no rating, no room type)
/// and a name shared by two records.
inline PoiCatalog property_catalog() {
  std::vector<PoiRecord> v;
  auto add = [&](PoiRecord r) { v.push_back(std::move(r)); };
  const char* cities[] = {"Avalon", "Brindle"};
  int n = 0;
  for (const char* city : cities) {
    for (int i = 0; i < 3; ++i) {
      PoiRecord h;
      h.id = "ac-" + std::to_string(++n);
      h.kind = PoiKind::accommodation;
      h.city = city;
      h.name = std::string(city) + " Inn " + std::to_string(i);
      h.price = 5000 + 2500 * i;
      if (i != 2) h.room_type = i ? "private room" : "entire home";
      if (i == 1) h.house_rules = {"no parties", "no smoking"};
      if (i == 0) h.house_rules = {"no pets"};
      if (i != 1) h.max_occupancy = 2 + i;
      h.rating = i == 2 ? std::optional<Fixed1>{} : Fixed1{30 + 7 * i};
      add(h);
      PoiRecord r;
      r.id = "re-" + std::to_string(n);
      r.kind = PoiKind::restaurant;
      r.city = city;
      r.name = i == 0 ? "Corner Grill" : std::string(city) + " Diner " + std::to_string(i);
      r.price = 1200 + 900 * i;
      r.cuisines = i == 2 ? std::vector<std::string>{} : (i ? std::vector<std::string>{"Chinese", "Thai"} : std::vector<std::string>{"Italian"});
      if (i != 1) r.rating = Fixed1{25 + 10 * i};
      add(r);
      PoiRecord a;
      a.id = "at-" + std::to_string(n);
      a.kind = PoiKind::attraction;
      a.city = city;
      a.name = std::string(city) + " Museum " + std::to_string(i);
      a.price = 800 * i;
      if (i) a.rating = Fixed1{40 + i};
      add(a);
    }
    PoiRecord e;
    e.id = std::string("ev-") + city[0];
    e.kind = PoiKind::event;
    e.city = city;
    e.name = std::string(city) + " Fair";
    e.price = 3000;
    add(e);
    PoiRecord c;
    c.id = std::string("lc-") + city[0];
    c.kind = PoiKind::innercity_transit;
    c.city = c.origin = c.destination = city;
    c.name = "taxi ride";
    c.mode = "taxi";
    c.price = 1500;
    add(c);
  }
  PoiRecord f;
  f.id = "fl-1";
  f.kind = PoiKind::flight;
  f.origin = "Avalon";
  f.destination = "Brindle";
  f.name = "F100";
  f.price = 20000;
  f.depart = Timestamp{Date::parse("2024-03-01"), 8 * 60};
  f.arrive = Timestamp{Date::parse("2024-03-01"), 10 * 60};
  add(f);
  PoiRecord t;
  t.id = "tr-1";
  t.kind = PoiKind::intercity_transit;
  t.origin = "Brindle";
  t.destination = "Avalon";
  t.name = "T7";
  t.mode = "train";
  t.price = 4500;
  add(t);
  return PoiCatalog(std::move(v));
}

class ConstraintGen {
public:
  ConstraintGen(const PoiCatalog& catalog, std::uint64_t seed) : rng_(seed) {
    for (const auto& r : catalog.records()) {
      refs_.push_back(r.id);
      refs_.push_back(r.name);
      if (!r.city.empty()) words_.push_back(r.city);
      words_.insert(words_.end(), r.cuisines.begin(), r.cuisines.end());
      words_.insert(words_.end(), r.house_rules.begin(), r.house_rules.end());
      if (r.room_type) words_.push_back(*r.room_type);
      if (!r.mode.empty()) words_.push_back(r.mode);
    }
    words_.push_back("flight");
    words_.push_back("Nowhere");
    refs_.push_back("no-such-poi");
  }

  dsl::Expr constraint() {
    auto e = boolean(3, false);
    if (rng_.chance(5)) e = dsl::result_wrap(std::move(e));
    return e;
  }

  Rng& rng() { return rng_; }

private:
  const std::string& pick(const std::vector<std::string>& v) { return v[rng_.index(v.size())]; }

  dsl::Expr int_literal() {
    static const std::int64_t anchors[] = {0, 1, 2, 3, 4, 1200, 5000, 7500, 20000, 30000, 60000};
    if (rng_.chance(60)) return dsl::int_lit(anchors[rng_.index(std::size(anchors))]);
    return dsl::int_lit(rng_.between(std::int64_t{-50}, std::int64_t{80000}));
  }

  dsl::Expr integer(int depth, bool body) {
    const int roll = static_cast<int>(rng_.index(10));
    if (depth > 0 && roll == 0) {
      static const dsl::ArithOp ops[] = {dsl::ArithOp::add, dsl::ArithOp::sub, dsl::ArithOp::mul};
      auto op = ops[rng_.index(3)];
      auto rhs = op == dsl::ArithOp::mul ? dsl::int_lit(rng_.between(std::int64_t{0}, std::int64_t{4})) : integer(depth - 1, body);
      return dsl::arith(integer(depth - 1, body), op, std::move(rhs));
    }
    if (roll < 4) return int_literal();
    if (body) return dsl::item_field(rng_.chance(70) ? dsl::ItemField::price : dsl::ItemField::max_occupancy);
    static const dsl::Head heads[] = {dsl::Head::days, dsl::Head::people_number, dsl::Head::total_budget, dsl::Head::cost_of};
    const auto h = heads[rng_.index(4)];
    if (h != dsl::Head::cost_of) return dsl::accessor(h);
    static const char* kinds[] = {"accommodation", "restaurant", "attraction", "event", "flight", "intercity_transit",
                                  "innercity_transit"};
    return dsl::accessor(h, kinds[rng_.index(std::size(kinds))]);
  }

  dsl::Expr set_operand(bool body) {
    if (body && rng_.chance(50)) return dsl::item_field(rng_.chance(50) ? dsl::ItemField::cuisines : dsl::ItemField::house_rules);
    if (!body && rng_.chance(80)) {
      static const dsl::Head heads[] = {dsl::Head::room_types, dsl::Head::house_rules, dsl::Head::transport_modes,
                                        dsl::Head::cuisines, dsl::Head::visited_cities};
      return dsl::accessor(heads[rng_.index(5)]);
    }
    std::vector<std::string> members;
    const auto n = rng_.index(4);
    for (std::size_t i = 0; i < n; ++i) members.push_back(pick(words_));
    return dsl::set_lit(members);
  }

  dsl::Expr text_operand(bool body) {
    if (body && rng_.chance(60)) {
      static const dsl::ItemField fs[] = {dsl::ItemField::id, dsl::ItemField::name, dsl::ItemField::city,
                                          dsl::ItemField::room_type, dsl::ItemField::mode};
      return dsl::item_field(fs[rng_.index(5)]);
    }
    return dsl::str_lit(rng_.chance(50) ? pick(words_) : pick(refs_));
  }

  dsl::Expr fixed_operand(bool body) {
    if (rng_.chance(50)) return dsl::fixed_lit(rng_.between(std::int64_t{0}, std::int64_t{50}));
    if (body) return dsl::item_field(dsl::ItemField::rating);
    return dsl::accessor(dsl::Head::rating_of, pick(refs_));
  }

  dsl::CmpOp any_op() {
    static const dsl::CmpOp ops[] = {dsl::CmpOp::eq, dsl::CmpOp::ne, dsl::CmpOp::lt, dsl::CmpOp::le, dsl::CmpOp::gt, dsl::CmpOp::ge};
    return ops[rng_.index(6)];
  }

  dsl::CmpOp eq_op() { return rng_.chance(50) ? dsl::CmpOp::eq : dsl::CmpOp::ne; }

  dsl::Expr atom(bool body) {
    switch (rng_.index(body ? 5 : 7)) {
      case 0: return dsl::compare(integer(2, body), any_op(), integer(2, body));
      case 1: return dsl::compare(fixed_operand(body), any_op(), fixed_operand(body));
      case 2: return dsl::membership(text_operand(body), set_operand(body), rng_.chance(40));
      case 3:
        return rng_.chance(50) ? dsl::compare(text_operand(body), eq_op(), text_operand(body))
                                : dsl::compare(set_operand(body), eq_op(), set_operand(body));
      case 4: return dsl::bool_lit(rng_.chance(50));
      case 5: return dsl::accessor(dsl::Head::poi_visited, pick(refs_));
      default: {
        static const char* kinds[] = {"any", "accommodation", "restaurant", "attraction", "flight", "innercity_transit"};
        return dsl::quantifier(rng_.chance(50) ? dsl::NodeKind::forall : dsl::NodeKind::exists,
                               kinds[rng_.index(std::size(kinds))], boolean(2, true));
      }
    }
  }

  dsl::Expr boolean(int depth, bool body) {
    if (depth == 0 || rng_.chance(40)) return atom(body);
    switch (rng_.index(3)) {
      case 0: return dsl::negation(boolean(depth - 1, body));
      default: {
        std::vector<dsl::Expr> parts;
        const auto n = 2 + rng_.index(2);
        for (std::size_t i = 0; i < n; ++i) parts.push_back(boolean(depth - 1, body));
        dsl::Expr e;
        e.kind = rng_.chance(50) ? dsl::NodeKind::conjunction : dsl::NodeKind::disjunction;
        e.children = std::move(parts);
        return e;
      }
    }
  }

  Rng rng_;
  std::vector<std::string> refs_, words_;
};

/// A plan of 1-4 days whose items are catalog records, records under the
/// wrong kind, or ids the catalog does not know.
inline Itinerary random_plan(const PoiCatalog& catalog, Rng& rng) {
  Itinerary p;
  p.query_id = "prop";
  const auto days = 1 + rng.index(4);
  for (std::size_t d = 0; d < days; ++d) {
    DayPlan day;
    day.date = Date::parse("2024-03-01").plus(static_cast<int>(d));
    const auto n = rng.index(6);
    for (std::size_t i = 0; i < n; ++i) {
      ActivityItem it;
      const auto& r = catalog.records()[rng.index(catalog.size())];
      it.poi_id = r.id;
      it.kind = r.kind;
      if (rng.chance(8)) it.poi_id = "ghost-" + std::to_string(rng.index(3));
      if (rng.chance(5)) it.kind = r.kind == PoiKind::restaurant ? PoiKind::attraction : PoiKind::restaurant;
      it.quantity = 1 + static_cast<int>(rng.index(3));
      it.unit_cost = rng.between(std::int64_t{0}, std::int64_t{9999});
      day.items.push_back(it);
    }
    p.days.push_back(std::move(day));
  }
  return p;
}

struct PropertyTally {
  std::size_t pairs = 0;
  std::size_t parse_failures = 0;
  std::size_t oracle_mismatches = 0;    // evaluator vs reference
  std::size_t negation_failures = 0;    // negate is not the complement
  std::size_t idempotence_failures = 0;
  std::size_t canon_drift = 0;          // canonical form evaluates differently
  std::size_t held = 0;                 // pairs where the constraint holds
  std::vector<std::string> examples;    // first few failures

  std::size_t disagreements() const {
    return parse_failures + oracle_mismatches + negation_failures + idempotence_failures + canon_drift;
  }
};

/// Checks `pairs` random (constraint, plan) pairs: render/parse round trip,
/// evaluator against the reference, negation as complement under both
/// evaluators, and canonical-form idempotence and meaning.
inline PropertyTally check_dsl_properties(std::size_t pairs, std::uint64_t seed) {
  const auto catalog = property_catalog();
  ConstraintGen gen(catalog, seed);
  PropertyTally t;
  auto note = [&](std::size_t& counter, const std::string& what) {
    ++counter;
    if (t.examples.size() < 8) t.examples.push_back(what);
  };
  for (std::size_t i = 0; i < pairs; ++i) {
    ++t.pairs;
    const auto e = gen.constraint();
    const auto plan = random_plan(catalog, gen.rng());
    Query q;
    q.id = "prop";
    q.origin = "Avalon";
    q.destinations = {"Brindle"};
    q.dates = {Date::parse("2024-03-01")};
    q.people = 1 + static_cast<int>(gen.rng().index(4));
    const auto text = dsl::render(e);
    dsl::Expr parsed;
    try {
      parsed = dsl::parse(text);
    } catch (const Error& err) {
      note(t.parse_failures, "parse: " + text + " :: " + err.what());
      continue;
    }
    const ReferenceEvaluator ref(plan, catalog, q.people);
    const bool want = ref.holds(e);
    const bool got = dsl::evaluate(parsed, plan, catalog, q);
    t.held += want;
    if (got != want || ref.holds(parsed) != want) note(t.oracle_mismatches, "eval: " + text);

    const auto neg = dsl::negate(parsed);
    if (dsl::evaluate(neg, plan, catalog, q) == got || ref.holds(neg) == want)
      note(t.negation_failures, "negate: " + text + " -> " + dsl::render(neg));

    const auto c1 = dsl::canonicalize(parsed);
    const auto c2 = dsl::canonicalize(c1);
    bool stable = c1 == c2;
    try {
      stable = stable && dsl::canonical_text(dsl::parse(dsl::render(c1))) == dsl::render(c1);
    } catch (const Error&) {
      stable = false;
    }
    if (!stable) note(t.idempotence_failures, "canon: " + text + " -> " + dsl::render(c1) + " -> " + dsl::render(c2));
    if (dsl::evaluate(c1, plan, catalog, q) != want) note(t.canon_drift, "canon meaning: " + text + " -> " + dsl::render(c1));
  }
  return t;
}

}  // namespace fixtures
