// SPDX-License-Identifier: Apache-2.0
#pragma once

// Constraint expression tree. Nodes are plain values; children are owned.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "tripdiag/core/types.hpp"

namespace tripdiag::dsl {

enum class ValueType : std::uint8_t { integer, fixed, string, string_set, boolean };

inline constexpr auto kValueTypeNames = make_names(
    std::pair{ValueType::integer, "integer"}, std::pair{ValueType::fixed, "fixed-point"},
    std::pair{ValueType::string, "string"}, std::pair{ValueType::string_set, "string set"},
    std::pair{ValueType::boolean, "boolean"});

inline std::string_view to_string(ValueType t) { return kValueTypeNames.name(t); }

/// Sorted, duplicate-free list of strings.
using StringSet = std::vector<std::string>;

inline StringSet make_set(std::vector<std::string> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

using Value = std::variant<std::int64_t, Fixed1, std::string, StringSet, bool>;

inline ValueType type_of(const Value& v) { return static_cast<ValueType>(v.index()); }

/// Plan-level accessor vocabulary. Every head is defined on any schema-valid plan.
enum class Head : std::uint8_t {
  days,
  people_number,
  total_budget,
  cost_of,
  room_types,
  house_rules,
  transport_modes,
  cuisines,
  visited_cities,
  rating_of,
  poi_visited,
};

inline constexpr auto kHeadNames = make_names(
    std::pair{Head::days, "days"}, std::pair{Head::people_number, "people_number"},
    std::pair{Head::total_budget, "total_budget"}, std::pair{Head::cost_of, "cost_of"},
    std::pair{Head::room_types, "room_types"}, std::pair{Head::house_rules, "house_rules"},
    std::pair{Head::transport_modes, "transport_modes"}, std::pair{Head::cuisines, "cuisines"},
    std::pair{Head::visited_cities, "visited_cities"}, std::pair{Head::rating_of, "rating_of"},
    std::pair{Head::poi_visited, "poi_visited"});

inline std::string_view to_string(Head h) { return kHeadNames.name(h); }

inline bool head_takes_argument(Head h) {
  return h == Head::cost_of || h == Head::rating_of || h == Head::poi_visited;
}

inline ValueType head_type(Head h) {
  switch (h) {
    case Head::days:
    case Head::people_number:
    case Head::total_budget:
    case Head::cost_of: return ValueType::integer;
    case Head::room_types:
    case Head::house_rules:
    case Head::transport_modes:
    case Head::cuisines:
    case Head::visited_cities: return ValueType::string_set;
    case Head::rating_of: return ValueType::fixed;
    case Head::poi_visited: return ValueType::boolean;
  }
  return ValueType::integer;
}

/// Accessors that can be undefined for some plans (unresolvable references).
inline bool head_is_partial(Head h) { return h == Head::rating_of; }

/// Fields of the item bound inside all_items / any_item.
enum class ItemField : std::uint8_t { id, name, city, price, rating, cuisines, room_type, house_rules, mode, max_occupancy };

inline constexpr auto kItemFieldNames = make_names(
    std::pair{ItemField::id, "id"}, std::pair{ItemField::name, "name"}, std::pair{ItemField::city, "city"},
    std::pair{ItemField::price, "price"}, std::pair{ItemField::rating, "rating"},
    std::pair{ItemField::cuisines, "cuisines"}, std::pair{ItemField::room_type, "room_type"},
    std::pair{ItemField::house_rules, "house_rules"}, std::pair{ItemField::mode, "mode"},
    std::pair{ItemField::max_occupancy, "max_occupancy"});

inline std::string_view to_string(ItemField f) { return kItemFieldNames.name(f); }

inline ValueType field_type(ItemField f) {
  switch (f) {
    case ItemField::price:
    case ItemField::max_occupancy: return ValueType::integer;
    case ItemField::rating: return ValueType::fixed;
    case ItemField::cuisines:
    case ItemField::house_rules: return ValueType::string_set;
    default: return ValueType::string;
  }
}

enum class CmpOp : std::uint8_t { eq, ne, lt, le, gt, ge };

inline std::string_view to_string(CmpOp op) {
  switch (op) {
    case CmpOp::eq: return "==";
    case CmpOp::ne: return "!=";
    case CmpOp::lt: return "<";
    case CmpOp::le: return "<=";
    case CmpOp::gt: return ">";
    case CmpOp::ge: return ">=";
  }
  return "?";
}

/// a op b  <=>  not (a complement(op) b)
inline CmpOp complement(CmpOp op) {
  switch (op) {
    case CmpOp::eq: return CmpOp::ne;
    case CmpOp::ne: return CmpOp::eq;
    case CmpOp::lt: return CmpOp::ge;
    case CmpOp::le: return CmpOp::gt;
    case CmpOp::gt: return CmpOp::le;
    case CmpOp::ge: return CmpOp::lt;
  }
  return op;
}

/// a op b  <=>  b mirror(op) a
inline CmpOp mirror(CmpOp op) {
  switch (op) {
    case CmpOp::lt: return CmpOp::gt;
    case CmpOp::le: return CmpOp::ge;
    case CmpOp::gt: return CmpOp::lt;
    case CmpOp::ge: return CmpOp::le;
    default: return op;
  }
}

template <class T>
bool apply_cmp(CmpOp op, const T& a, const T& b) {
  switch (op) {
    case CmpOp::eq: return a == b;
    case CmpOp::ne: return !(a == b);
    case CmpOp::lt: return a < b;
    case CmpOp::le: return a <= b;
    case CmpOp::gt: return a > b;
    case CmpOp::ge: return a >= b;
  }
  return false;
}

enum class ArithOp : std::uint8_t { add, sub, mul };

inline std::string_view to_string(ArithOp op) {
  switch (op) {
    case ArithOp::add: return "+";
    case ArithOp::sub: return "-";
    case ArithOp::mul: return "*";
  }
  return "?";
}

enum class NodeKind : std::uint8_t {
  literal,
  accessor,    // head(plan[, 'arg'])
  item_field,  // item.field, only inside a quantifier body
  arith,       // children: lhs, rhs
  compare,     // children: lhs, rhs
  membership,  // children: element, set; `negated` for `not in`
  conjunction,
  disjunction,
  negation,     // children: operand
  forall,       // all_items(plan, 'kind', body)
  exists,       // any_item(plan, 'kind', body)
  result_wrap,  // result = (expr)
};

struct Expr {
  NodeKind kind = NodeKind::literal;
  Value value = std::int64_t{0};
  Head head = Head::days;
  ItemField field = ItemField::id;
  CmpOp cmp = CmpOp::eq;
  ArithOp arith = ArithOp::add;
  bool negated = false;
  std::string arg;  // accessor argument, or quantifier kind ('any' for all kinds)
  std::vector<Expr> children;

  friend bool operator==(const Expr&, const Expr&) = default;

  const Expr& lhs() const { return children.at(0); }
  const Expr& rhs() const { return children.at(1); }
};

// ---- plain constructors (no normalization) -------------------------------------

inline Expr literal(Value v) {
  Expr e;
  e.kind = NodeKind::literal;
  e.value = std::move(v);
  return e;
}
inline Expr int_lit(std::int64_t v) { return literal(v); }
inline Expr fixed_lit(std::int64_t tenths) { return literal(Fixed1{tenths}); }
inline Expr str_lit(std::string s) { return literal(std::move(s)); }
inline Expr set_lit(std::vector<std::string> s) { return literal(make_set(std::move(s))); }
inline Expr bool_lit(bool b) { return literal(b); }

inline Expr accessor(Head h, std::string arg = {}) {
  Expr e;
  e.kind = NodeKind::accessor;
  e.head = h;
  e.arg = std::move(arg);
  return e;
}

inline Expr item_field(ItemField f) {
  Expr e;
  e.kind = NodeKind::item_field;
  e.field = f;
  return e;
}

inline Expr arith(Expr a, ArithOp op, Expr b) {
  Expr e;
  e.kind = NodeKind::arith;
  e.arith = op;
  e.children = {std::move(a), std::move(b)};
  return e;
}

inline Expr compare(Expr a, CmpOp op, Expr b) {
  Expr e;
  e.kind = NodeKind::compare;
  e.cmp = op;
  e.children = {std::move(a), std::move(b)};
  return e;
}

inline Expr membership(Expr element, Expr set, bool negated = false) {
  Expr e;
  e.kind = NodeKind::membership;
  e.negated = negated;
  e.children = {std::move(element), std::move(set)};
  return e;
}

inline Expr negation(Expr x) {
  Expr e;
  e.kind = NodeKind::negation;
  e.children = {std::move(x)};
  return e;
}

inline Expr quantifier(NodeKind k, std::string kind_arg, Expr body) {
  Expr e;
  e.kind = k;
  e.arg = std::move(kind_arg);
  e.children = {std::move(body)};
  return e;
}

inline Expr result_wrap(Expr x) {
  Expr e;
  e.kind = NodeKind::result_wrap;
  e.children = {std::move(x)};
  return e;
}

inline bool is_constant(const Expr& e) {
  if (e.kind == NodeKind::literal) return true;
  if (e.kind == NodeKind::arith) return is_constant(e.lhs()) && is_constant(e.rhs());
  return false;
}

/// True when the subtree contains an accessor that may be undefined.
inline bool contains_partial(const Expr& e) {
  if (e.kind == NodeKind::item_field) return true;
  if (e.kind == NodeKind::accessor && head_is_partial(e.head)) return true;
  if (e.kind == NodeKind::forall || e.kind == NodeKind::exists) return false;  // quantifiers are total
  for (const auto& c : e.children)
    if (contains_partial(c)) return true;
  return false;
}

/// First plan accessor head (pre-order); item fields map to the matching head.
inline std::optional<Head> primary_head(const Expr& e) {
  switch (e.kind) {
    case NodeKind::accessor: return e.head;
    case NodeKind::item_field:
      switch (e.field) {
        case ItemField::price: return Head::cost_of;
        case ItemField::rating: return Head::rating_of;
        case ItemField::cuisines: return Head::cuisines;
        case ItemField::room_type:
        case ItemField::max_occupancy: return Head::room_types;
        case ItemField::house_rules: return Head::house_rules;
        case ItemField::mode: return Head::transport_modes;
        case ItemField::city: return Head::visited_cities;
        case ItemField::id:
        case ItemField::name: return Head::poi_visited;
      }
      return std::nullopt;
    default:
      for (const auto& c : e.children)
        if (auto h = primary_head(c)) return h;
      return std::nullopt;
  }
}

inline FindingCategory category_for(Head h) {
  switch (h) {
    case Head::days: return FindingCategory::days;
    case Head::people_number: return FindingCategory::people_number;
    case Head::total_budget: return FindingCategory::budget;
    case Head::cost_of: return FindingCategory::cost;
    case Head::room_types: return FindingCategory::room_type;
    case Head::house_rules: return FindingCategory::house_rule;
    case Head::transport_modes: return FindingCategory::transportation;
    case Head::cuisines: return FindingCategory::cuisine;
    case Head::visited_cities: return FindingCategory::visited_city;
    case Head::rating_of: return FindingCategory::rating;
    case Head::poi_visited: return FindingCategory::poi_visited;
  }
  return FindingCategory::schema_error;
}

/// Violation category of a constraint; constant constraints fall back to days.
inline FindingCategory category_of(const Expr& e) {
  auto h = primary_head(e);
  return h ? category_for(*h) : FindingCategory::days;
}

}  // namespace tripdiag::dsl
