// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "tripdiag/dsl/render.hpp"

namespace tripdiag::dsl {

/// Logical complement: evaluate(negate(e)) == !evaluate(e) on every plan.
///
/// Comparisons over total accessors flip their operator. Atoms that may be
/// undefined (rating_of, item fields) are wrapped in `not (...)` instead,
/// since both an atom and its flipped form are false when undefined.
inline Expr negate(const Expr& e) {
  switch (e.kind) {
    case NodeKind::literal:
      if (const auto* b = std::get_if<bool>(&e.value)) return bool_lit(!*b);
      return negation(e);
    case NodeKind::compare: {
      if (contains_partial(e)) return negation(e);
      Expr out = e;
      out.cmp = complement(e.cmp);
      return out;
    }
    case NodeKind::membership: {
      if (contains_partial(e)) return negation(e);
      Expr out = e;
      out.negated = !e.negated;
      return out;
    }
    case NodeKind::conjunction:
    case NodeKind::disjunction: {
      std::vector<Expr> parts;
      for (const auto& c : e.children) parts.push_back(negate(c));
      return e.kind == NodeKind::conjunction ? disj(std::move(parts)) : conj(std::move(parts));
    }
    case NodeKind::negation: return e.children[0];
    case NodeKind::forall: return quantifier(NodeKind::exists, e.arg, negate(e.children[0]));
    case NodeKind::exists: return quantifier(NodeKind::forall, e.arg, negate(e.children[0]));
    case NodeKind::result_wrap: return negate(e.children[0]);
    default: return negation(e);
  }
}

}  // namespace tripdiag::dsl
