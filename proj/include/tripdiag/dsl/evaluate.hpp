// SPDX-License-Identifier: Apache-2.0
#pragma once

// Exact evaluation of a constraint against a concrete plan.
//
// Evaluation is total. Costs come from catalog prices (the plan's own
// unit_cost values are ignored) and unresolvable items contribute nothing.
// A comparison whose operand is undefined (an unknown rating_of reference,
// a field of an unresolvable item) is false.

#include <map>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "tripdiag/core/catalog.hpp"
#include "tripdiag/dsl/ast.hpp"

namespace tripdiag::dsl {

/// Travel mode of a transit record; flights without an explicit mode are "flight".
inline std::string effective_mode(const PoiRecord& r) {
  if (!r.mode.empty()) return r.mode;
  return r.kind == PoiKind::flight ? "flight" : "";
}

inline bool is_stay_or_activity(PoiKind k) {
  return k == PoiKind::accommodation || k == PoiKind::restaurant || k == PoiKind::attraction || k == PoiKind::event;
}

/// Plan-level quantities every accessor reads from.
struct PlanFacts {
  struct Entry {
    const ActivityItem* item;
    const PoiRecord* record;  // nullptr when unresolvable
  };

  std::vector<Entry> entries;
  Money total = 0;
  std::map<PoiKind, Money> cost_by_kind;
  StringSet room_types, house_rules, transport_modes, cuisines, visited_cities;

  PlanFacts(const Itinerary& plan, const PoiCatalog& catalog) {
    std::set<std::string> rt, hr, tm, cu, vc;
    for (const auto& day : plan.days) {
      for (const auto& item : day.items) {
        const auto* rec = catalog.resolve(item.poi_id, item.kind);
        entries.push_back({&item, rec});
        if (!rec) continue;
        const Money cost = rec->price * item.quantity;
        total += cost;
        cost_by_kind[item.kind] += cost;
        if (rec->room_type) rt.insert(*rec->room_type);
        hr.insert(rec->house_rules.begin(), rec->house_rules.end());
        cu.insert(rec->cuisines.begin(), rec->cuisines.end());
        if (is_transit(rec->kind)) {
          if (auto m = effective_mode(*rec); !m.empty()) tm.insert(m);
        }
        if (is_stay_or_activity(rec->kind)) vc.insert(rec->city);
      }
    }
    room_types.assign(rt.begin(), rt.end());
    house_rules.assign(hr.begin(), hr.end());
    transport_modes.assign(tm.begin(), tm.end());
    cuisines.assign(cu.begin(), cu.end());
    visited_cities.assign(vc.begin(), vc.end());
  }

  bool visited(const std::string& ref) const {
    for (const auto& e : entries)
      if (e.record && (e.record->id == ref || e.record->name == ref)) return true;
    return false;
  }
};

class Evaluator {
public:
  Evaluator(const Itinerary& plan, const PoiCatalog& catalog, const Query& query)
      : facts_(plan, catalog), catalog_(catalog), query_(query), days_(static_cast<std::int64_t>(plan.days.size())) {}

  bool holds(const Expr& e) const { return pred(e, nullptr); }
  bool holds_for_item(const Expr& body, const PoiRecord* record) const { return pred(body, record); }

  const PlanFacts& facts() const { return facts_; }

private:
  using Val = std::variant<std::monostate, std::int64_t, Fixed1, std::string, StringSet, bool>;

  static Val lift(const Value& v) {
    return std::visit([](const auto& x) -> Val { return x; }, v);
  }

  Val field_value(ItemField f, const PoiRecord* r) const {
    if (!r) return {};
    switch (f) {
      case ItemField::id: return r->id;
      case ItemField::name: return r->name;
      case ItemField::city: return r->city;
      case ItemField::price: return r->price;
      case ItemField::rating: return r->rating ? Val(*r->rating) : Val{};
      case ItemField::cuisines: return r->cuisines;
      case ItemField::room_type: return r->room_type ? Val(*r->room_type) : Val{};
      case ItemField::house_rules: return r->house_rules;
      case ItemField::mode: {
        auto m = effective_mode(*r);
        return m.empty() ? Val{} : Val(m);
      }
      case ItemField::max_occupancy: return r->max_occupancy ? Val(std::int64_t{*r->max_occupancy}) : Val{};
    }
    return {};
  }

  Val accessor_value(const Expr& e) const {
    switch (e.head) {
      case Head::days: return days_;
      case Head::people_number: return std::int64_t{query_.people};
      case Head::total_budget: return facts_.total;
      case Head::cost_of: {
        auto kind = kPoiKindNames.find(e.arg);
        if (!kind) return std::int64_t{0};
        auto it = facts_.cost_by_kind.find(*kind);
        return it == facts_.cost_by_kind.end() ? std::int64_t{0} : it->second;
      }
      case Head::room_types: return facts_.room_types;
      case Head::house_rules: return facts_.house_rules;
      case Head::transport_modes: return facts_.transport_modes;
      case Head::cuisines: return facts_.cuisines;
      case Head::visited_cities: return facts_.visited_cities;
      case Head::rating_of: {
        const auto* r = catalog_.find_by_ref(e.arg);
        return (r && r->rating) ? Val(*r->rating) : Val{};
      }
      case Head::poi_visited: return facts_.visited(e.arg);
    }
    return {};
  }

  Val value(const Expr& e, const PoiRecord* item) const {
    switch (e.kind) {
      case NodeKind::literal: return lift(e.value);
      case NodeKind::accessor: return accessor_value(e);
      case NodeKind::item_field: return field_value(e.field, item);
      case NodeKind::arith: {
        const Val a = value(e.lhs(), item);
        const Val b = value(e.rhs(), item);
        if (!std::holds_alternative<std::int64_t>(a) || !std::holds_alternative<std::int64_t>(b)) return {};
        const auto x = std::get<std::int64_t>(a), y = std::get<std::int64_t>(b);
        switch (e.arith) {
          case ArithOp::add: return x + y;
          case ArithOp::sub: return x - y;
          case ArithOp::mul: return x * y;
        }
        return {};
      }
      default: return pred(e, item);
    }
  }

  static bool compare_values(CmpOp op, const Val& a, const Val& b) {
    if (a.index() != b.index() || std::holds_alternative<std::monostate>(a)) return false;
    return std::visit(
        [&](const auto& x) -> bool {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, std::monostate>) {
            return false;
          } else {
            return apply_cmp(op, x, std::get<T>(b));
          }
        },
        a);
  }

  bool pred(const Expr& e, const PoiRecord* item) const {
    switch (e.kind) {
      case NodeKind::literal: return std::get<bool>(e.value);
      case NodeKind::accessor: {
        const Val v = accessor_value(e);
        return std::holds_alternative<bool>(v) && std::get<bool>(v);
      }
      case NodeKind::compare: return compare_values(e.cmp, value(e.lhs(), item), value(e.rhs(), item));
      case NodeKind::membership: {
        const Val x = value(e.lhs(), item);
        const Val s = value(e.rhs(), item);
        if (!std::holds_alternative<std::string>(x) || !std::holds_alternative<StringSet>(s)) return false;
        const auto& set = std::get<StringSet>(s);
        const bool in = std::binary_search(set.begin(), set.end(), std::get<std::string>(x));
        return e.negated ? !in : in;
      }
      case NodeKind::conjunction:
        for (const auto& c : e.children)
          if (!pred(c, item)) return false;
        return true;
      case NodeKind::disjunction:
        for (const auto& c : e.children)
          if (pred(c, item)) return true;
        return false;
      case NodeKind::negation: return !pred(e.children[0], item);
      case NodeKind::forall:
      case NodeKind::exists: {
        const bool all = e.kind == NodeKind::forall;
        const auto kind = kPoiKindNames.find(e.arg);
        for (const auto& entry : facts_.entries) {
          if (kind && entry.item->kind != *kind) continue;
          const bool b = pred(e.children[0], entry.record);
          if (all && !b) return false;
          if (!all && b) return true;
        }
        return all;
      }
      case NodeKind::result_wrap: return pred(e.children[0], item);
      case NodeKind::item_field:
      case NodeKind::arith: return false;
    }
    return false;
  }

  PlanFacts facts_;
  const PoiCatalog& catalog_;
  const Query& query_;
  std::int64_t days_;
};

inline bool evaluate(const Expr& e, const Itinerary& plan, const PoiCatalog& catalog, const Query& query) {
  return Evaluator(plan, catalog, query).holds(e);
}

/// Evaluates a quantifier body on one record (nullptr = unresolvable item).
inline bool evaluate_item(const Expr& body, const PoiRecord* record) {
  static const Itinerary kPlan;
  static const PoiCatalog kCatalog;
  static const Query kQuery;
  return Evaluator(kPlan, kCatalog, kQuery).holds_for_item(body, record);
}

}  // namespace tripdiag::dsl
