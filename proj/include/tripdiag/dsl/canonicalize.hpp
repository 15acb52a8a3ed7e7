// SPDX-License-Identifier: Apache-2.0
#pragma once

// Canonical form used to decide constraint equivalence.
//
// Two constraints are treated as equivalent when their canonical renderings
// are identical. This under-approximates semantic equivalence: every rewrite
// below preserves truth on all plans, but not every equivalent pair
// converges to the same form.

#include <string>
#include <vector>

#include "tripdiag/dsl/negate.hpp"
#include "tripdiag/dsl/parser.hpp"

namespace tripdiag::dsl {

namespace detail {

inline std::optional<Value> constant_value(const Expr& e) {
  if (e.kind == NodeKind::literal) return e.value;
  if (e.kind == NodeKind::arith && is_constant(e)) return Value{fold_int(e)};
  return std::nullopt;
}

inline bool compare_constants(CmpOp op, const Value& a, const Value& b) {
  if (a.index() != b.index()) return false;
  return std::visit([&](const auto& x) { return apply_cmp(op, x, std::get<std::decay_t<decltype(x)>>(b)); }, a);
}

inline Expr canon_compare(Expr e);
inline Expr canon_node(Expr e);

inline Expr canon_arith(Expr e) {
  if (is_constant(e)) return int_lit(fold_int(e));
  const bool commutative = e.arith != ArithOp::sub;
  if (commutative) {
    const bool lc = is_constant(e.lhs()), rc = is_constant(e.rhs());
    if ((lc && !rc) || (lc == rc && render(e.lhs()) > render(e.rhs()))) std::swap(e.children[0], e.children[1]);
  }
  return e;
}

inline Expr canon_compare(Expr e) {
  const auto lv = constant_value(e.lhs());
  const auto rv = constant_value(e.rhs());
  if (lv && rv) return bool_lit(compare_constants(e.cmp, *lv, *rv));

  // accessor on the left, constants on the right
  if ((lv && !rv) || (!lv && !rv && render(e.lhs()) > render(e.rhs()))) {
    std::swap(e.children[0], e.children[1]);
    e.cmp = mirror(e.cmp);
  }
  if (e.rhs().kind != NodeKind::literal) return e;
  const Value& c = e.rhs().value;

  if (const auto* b = std::get_if<bool>(&c)) {
    const bool keep = (e.cmp == CmpOp::eq) == *b;
    Expr p = std::move(e.children[0]);
    return keep ? p : canon_node(negate(p));
  }

  if (const auto* k = std::get_if<std::int64_t>(&c)) {
    const Expr& lhs = e.lhs();
    if (lhs.kind == NodeKind::arith && lhs.arith != ArithOp::mul) {
      const bool lconst = is_constant(lhs.lhs()), rconst = is_constant(lhs.rhs());
      if (rconst && !lconst) {  // X + m op k  /  X - m op k
        const auto m = fold_int(lhs.rhs());
        const auto bound = lhs.arith == ArithOp::add ? *k - m : *k + m;
        return canon_compare(compare(lhs.lhs(), e.cmp, int_lit(bound)));
      }
      if (lconst && !rconst && lhs.arith == ArithOp::sub) {  // m - X op k  ->  X mirror(op) m - k
        const auto m = fold_int(lhs.lhs());
        return canon_compare(compare(lhs.rhs(), mirror(e.cmp), int_lit(m - *k)));
      }
    }
    if (e.cmp == CmpOp::lt) return compare(std::move(e.children[0]), CmpOp::le, int_lit(*k - 1));
    if (e.cmp == CmpOp::gt) return compare(std::move(e.children[0]), CmpOp::ge, int_lit(*k + 1));
  }
  if (const auto* f = std::get_if<Fixed1>(&c)) {
    if (e.cmp == CmpOp::lt) return compare(std::move(e.children[0]), CmpOp::le, fixed_lit(f->tenths - 1));
    if (e.cmp == CmpOp::gt) return compare(std::move(e.children[0]), CmpOp::ge, fixed_lit(f->tenths + 1));
  }
  return e;
}

inline Expr canon_connective(Expr e) {
  const bool is_and = e.kind == NodeKind::conjunction;
  std::vector<Expr> kept;
  for (auto& c : e.children) {
    if (const auto* b = std::get_if<bool>(&c.value); b && c.kind == NodeKind::literal) {
      if (*b == is_and) continue;  // identity element
      return bool_lit(*b);         // absorbing element
    }
    kept.push_back(std::move(c));
  }
  Expr out = is_and ? conj(std::move(kept)) : disj(std::move(kept));
  if (out.kind == e.kind) {
    auto& ch = out.children;
    ch.erase(std::unique(ch.begin(), ch.end()), ch.end());
    if (ch.size() == 1) return std::move(ch[0]);
  }
  return out;
}

/// One bottom-up rewrite pass.
inline Expr canon_node(Expr e) {
  if (e.kind == NodeKind::result_wrap) return canon_node(std::move(e.children[0]));
  for (auto& c : e.children) c = canon_node(std::move(c));
  switch (e.kind) {
    case NodeKind::arith: return canon_arith(std::move(e));
    case NodeKind::compare: return canon_compare(std::move(e));
    case NodeKind::membership: {
      const auto x = constant_value(e.lhs());
      const auto s = constant_value(e.rhs());
      if (x && s) {
        const auto& set = std::get<StringSet>(*s);
        const bool in = std::binary_search(set.begin(), set.end(), std::get<std::string>(*x));
        return bool_lit(in != e.negated);
      }
      return e;
    }
    case NodeKind::negation: {
      Expr pushed = negate(e.children[0]);
      if (pushed.kind == NodeKind::negation) return pushed;
      return canon_node(std::move(pushed));
    }
    case NodeKind::conjunction:
    case NodeKind::disjunction: return canon_connective(std::move(e));
    case NodeKind::forall:
      if (e.children[0] == bool_lit(true)) return bool_lit(true);
      return e;
    case NodeKind::exists:
      if (e.children[0] == bool_lit(false)) return bool_lit(false);
      return e;
    default: return e;
  }
}

}  // namespace detail

/// Idempotent normal form: aliases resolved, `result =` stripped, accessors
/// on the left, strict integer bounds made inclusive, literal arithmetic
/// folded, negations pushed to atoms, connective operands sorted and
/// deduplicated.
inline Expr canonicalize(const Expr& e) {
  Expr cur = detail::canon_node(e);
  std::string key = render(cur);
  for (int i = 0; i < 32; ++i) {
    Expr next = detail::canon_node(cur);
    std::string next_key = render(next);
    if (next_key == key) return renormalize(std::move(next));
    cur = std::move(next);
    key = std::move(next_key);
  }
  return renormalize(std::move(cur));
}

inline std::string canonical_text(const Expr& e) { return render(canonicalize(e)); }

inline bool equivalent(const Expr& a, const Expr& b) { return canonical_text(a) == canonical_text(b); }

}  // namespace tripdiag::dsl
