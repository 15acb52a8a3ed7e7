// SPDX-License-Identifier: Apache-2.0
#pragma once

// Canonical text form. Rendering is the bit-exact interchange format for
// constraint lists, so spacing and quoting never vary.

#include <string>
#include <vector>

#include "tripdiag/dsl/ast.hpp"

namespace tripdiag::dsl {

namespace detail {

inline int precedence(const Expr& e) {
  switch (e.kind) {
    case NodeKind::result_wrap: return 0;
    case NodeKind::disjunction: return 1;
    case NodeKind::conjunction: return 2;
    case NodeKind::negation: return 3;
    case NodeKind::compare:
    case NodeKind::membership: return 4;
    case NodeKind::arith: return e.arith == ArithOp::mul ? 6 : 5;
    case NodeKind::literal:
      // negative numbers bind like a unary minus
      if (const auto* i = std::get_if<std::int64_t>(&e.value); i && *i < 0) return 7;
      return 8;
    default: return 8;
  }
}

inline std::string quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'' || c == '\\') out += '\\';
    out += c;
  }
  return out + "'";
}

inline std::string render_value(const Value& v) {
  switch (type_of(v)) {
    case ValueType::integer: return std::to_string(std::get<std::int64_t>(v));
    case ValueType::fixed: return std::get<Fixed1>(v).str();
    case ValueType::string: return quote(std::get<std::string>(v));
    case ValueType::boolean: return std::get<bool>(v) ? "true" : "false";
    case ValueType::string_set: {
      std::string out = "{";
      const auto& s = std::get<StringSet>(v);
      for (std::size_t i = 0; i < s.size(); ++i) out += (i ? ", " : "") + quote(s[i]);
      return out + "}";
    }
  }
  return "?";
}

}  // namespace detail

std::string render(const Expr& e);

namespace detail {

inline std::string wrap_if(const Expr& child, bool parens) {
  return parens ? "(" + render(child) + ")" : render(child);
}

}  // namespace detail

inline std::string render(const Expr& e) {
  using detail::precedence;
  using detail::wrap_if;
  switch (e.kind) {
    case NodeKind::literal: return detail::render_value(e.value);
    case NodeKind::accessor:
      return std::string(to_string(e.head)) + "(plan" + (head_takes_argument(e.head) ? ", " + detail::quote(e.arg) : "") + ")";
    case NodeKind::item_field: return "item." + std::string(to_string(e.field));
    case NodeKind::arith: {
      const int p = precedence(e);
      return wrap_if(e.lhs(), precedence(e.lhs()) < p) + " " + std::string(to_string(e.arith)) + " " +
             wrap_if(e.rhs(), precedence(e.rhs()) <= p);
    }
    case NodeKind::compare:
      return wrap_if(e.lhs(), precedence(e.lhs()) <= 4) + " " + std::string(to_string(e.cmp)) + " " +
             wrap_if(e.rhs(), precedence(e.rhs()) <= 4);
    case NodeKind::membership:
      return wrap_if(e.lhs(), precedence(e.lhs()) <= 4) + (e.negated ? " not in " : " in ") +
             wrap_if(e.rhs(), precedence(e.rhs()) <= 4);
    case NodeKind::conjunction:
    case NodeKind::disjunction: {
      const int p = precedence(e);
      std::string out;
      for (std::size_t i = 0; i < e.children.size(); ++i) {
        if (i) out += e.kind == NodeKind::conjunction ? " and " : " or ";
        out += wrap_if(e.children[i], precedence(e.children[i]) <= p);
      }
      return out;
    }
    case NodeKind::negation: return "not (" + render(e.children[0]) + ")";
    case NodeKind::forall:
    case NodeKind::exists:
      return std::string(e.kind == NodeKind::forall ? "all_items" : "any_item") + "(plan, " + detail::quote(e.arg) + ", " +
             render(e.children[0]) + ")";
    case NodeKind::result_wrap: return "result = (" + render(e.children[0]) + ")";
  }
  return "?";
}

// ---- normalizing constructors for commutative connectives -------------------------

namespace detail {

inline Expr connective(NodeKind k, std::vector<Expr> parts) {
  std::vector<Expr> flat;
  for (auto& p : parts) {
    if (p.kind == k) {
      for (auto& c : p.children) flat.push_back(std::move(c));
    } else {
      flat.push_back(std::move(p));
    }
  }
  if (flat.empty()) return bool_lit(k == NodeKind::conjunction);
  if (flat.size() == 1) return std::move(flat.front());
  std::vector<std::pair<std::string, Expr>> keyed;
  keyed.reserve(flat.size());
  for (auto& f : flat) keyed.emplace_back(render(f), std::move(f));
  std::stable_sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  Expr e;
  e.kind = k;
  for (auto& [key, f] : keyed) e.children.push_back(std::move(f));
  return e;
}

}  // namespace detail

/// Conjunction with nested conjunctions flattened and operands in canonical order.
inline Expr conj(std::vector<Expr> parts) { return detail::connective(NodeKind::conjunction, std::move(parts)); }

inline Expr disj(std::vector<Expr> parts) { return detail::connective(NodeKind::disjunction, std::move(parts)); }

}  // namespace tripdiag::dsl
