// SPDX-License-Identifier: Apache-2.0
#pragma once

// Three-valued evaluation of constraints over a partially filled slot list.
//
// `no` and `yes` are definite: every completion of the prefix makes the
// constraint false (resp. true). Bounds over the unfilled slots relax the
// no-repeat and chronology rules, so they are sound but not tight.

#include <array>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "tripdiag/solver/slots.hpp"

namespace tripdiag::solver {

enum class Tri : std::uint8_t { no, yes, maybe };

inline Tri tri_not(Tri a) { return a == Tri::maybe ? a : (a == Tri::yes ? Tri::no : Tri::yes); }
inline Tri tri_and(Tri a, Tri b) {
  if (a == Tri::no || b == Tri::no) return Tri::no;
  return (a == Tri::yes && b == Tri::yes) ? Tri::yes : Tri::maybe;
}
inline Tri tri_or(Tri a, Tri b) { return tri_not(tri_and(tri_not(a), tri_not(b))); }
inline Tri tri_of(bool b) { return b ? Tri::yes : Tri::no; }

class PartialEvaluator {
public:
  PartialEvaluator(const Query& query, const PoiCatalog& catalog, const std::vector<Slot>& slots)
      : query_(query), catalog_(catalog), slots_(slots) {
    const std::size_t n = slots.size();
    suf_total_.assign(n + 1, {0, 0});
    suf_kind_.assign(n + 1, {});
    suf_sets_.assign(n + 1, {});
    for (std::size_t i = n; i-- > 0;) {
      const Slot& s = slots[i];
      Bounds total{INT64_MAX, INT64_MIN};
      std::array<Bounds, kKinds> kind;
      kind.fill({INT64_MAX, INT64_MIN});
      auto sets = suf_sets_[i + 1];
      for (const PoiRecord* r : s.candidates) {
        const Money c = slot_cost(s, *r, query.people);
        total.lo = std::min(total.lo, c);
        total.hi = std::max(total.hi, c);
        for (std::size_t k = 0; k < kKinds; ++k) {
          const Money ck = static_cast<std::size_t>(r->kind) == k ? c : 0;
          kind[k].lo = std::min(kind[k].lo, ck);
          kind[k].hi = std::max(kind[k].hi, ck);
        }
        add_values(sets, *r);
      }
      if (s.candidates.empty()) {
        total = {0, 0};
        kind.fill({0, 0});
      }
      suf_total_[i] = {suf_total_[i + 1].lo + total.lo, suf_total_[i + 1].hi + total.hi};
      for (std::size_t k = 0; k < kKinds; ++k)
        suf_kind_[i][k] = {suf_kind_[i + 1][k].lo + kind[k].lo, suf_kind_[i + 1][k].hi + kind[k].hi};
      suf_sets_[i] = std::move(sets);
    }
    std::set<std::string> cities;
    for (const auto& s : slots)
      if (!is_leg(s.role)) cities.insert(s.city);
    visited_cities_.assign(cities.begin(), cities.end());
  }

  /// Value of `e` when slots [0, assigned) hold `chosen[0..assigned)`.
  Tri eval(const dsl::Expr& e, const std::vector<const PoiRecord*>& chosen, std::size_t assigned) {
    chosen_ = &chosen;
    assigned_ = assigned;
    must_ready_ = false;
    return pred(e);
  }

private:
  static constexpr std::size_t kKinds = std::size(kAllPoiKinds);
  enum SetHead : std::size_t { kRoom, kRules, kModes, kCuisines, kSetHeads };

  struct Bounds {
    std::int64_t lo, hi;
  };

  struct AVal {
    enum class K : std::uint8_t { interval, fixed, str, set, boolean, undefined } k = K::undefined;
    Bounds iv{0, 0};
    Fixed1 fx;
    std::string s;
    dsl::StringSet must, may;
    Tri b = Tri::maybe;
  };

  static void add_values(std::array<std::set<std::string>, kSetHeads>& sets, const PoiRecord& r) {
    if (r.room_type) sets[kRoom].insert(*r.room_type);
    sets[kRules].insert(r.house_rules.begin(), r.house_rules.end());
    sets[kCuisines].insert(r.cuisines.begin(), r.cuisines.end());
    if (is_transit(r.kind))
      if (auto m = dsl::effective_mode(r); !m.empty()) sets[kModes].insert(m);
  }

  void prepare_must() {
    if (must_ready_) return;
    for (auto& s : must_) s.clear();
    for (std::size_t i = 0; i < assigned_; ++i) add_values(must_, *(*chosen_)[i]);
    must_ready_ = true;
  }

  static SetHead set_head(dsl::Head h) {
    switch (h) {
      case dsl::Head::room_types: return kRoom;
      case dsl::Head::house_rules: return kRules;
      case dsl::Head::transport_modes: return kModes;
      default: return kCuisines;
    }
  }

  Bounds assigned_cost(std::optional<PoiKind> kind) const {
    Money c = 0;
    for (std::size_t i = 0; i < assigned_; ++i) {
      const PoiRecord* r = (*chosen_)[i];
      if (!kind || r->kind == *kind) c += slot_cost(slots_[i], *r, query_.people);
    }
    return {c, c};
  }

  static bool matches_ref(const PoiRecord& r, const std::string& ref) { return r.id == ref || r.name == ref; }

  const std::vector<char>& ref_suffix(const std::string& ref) {
    auto it = ref_cache_.find(ref);
    if (it != ref_cache_.end()) return it->second;
    std::vector<char> suf(slots_.size() + 1, 0);
    for (std::size_t i = slots_.size(); i-- > 0;) {
      bool any = false;
      for (const auto* r : slots_[i].candidates) any = any || matches_ref(*r, ref);
      suf[i] = static_cast<char>(any || suf[i + 1]);
    }
    return ref_cache_.emplace(ref, std::move(suf)).first->second;
  }

  /// Aggregate over slots [i, n) of a quantifier body, per start index.
  const std::vector<Tri>& quantifier_suffix(const dsl::Expr& q) {
    auto it = quant_cache_.find(&q);
    if (it != quant_cache_.end()) return it->second;
    const bool all = q.kind == dsl::NodeKind::forall;
    const auto kind = kPoiKindNames.find(q.arg);
    std::vector<Tri> suf(slots_.size() + 1, all ? Tri::yes : Tri::no);
    for (std::size_t i = slots_.size(); i-- > 0;) {
      bool any_true = false, any_false = false;
      for (const auto* r : slots_[i].candidates) {
        bool v;
        if (kind && r->kind != *kind) v = all;  // contributes no item
        else v = dsl::evaluate_item(q.children[0], r);
        (v ? any_true : any_false) = true;
      }
      Tri slot = Tri::maybe;
      if (!any_false) slot = Tri::yes;
      else if (!any_true) slot = Tri::no;
      suf[i] = all ? tri_and(slot, suf[i + 1]) : tri_or(slot, suf[i + 1]);
    }
    return quant_cache_.emplace(&q, std::move(suf)).first->second;
  }

  AVal value(const dsl::Expr& e) {
    using dsl::NodeKind;
    AVal v;
    switch (e.kind) {
      case NodeKind::literal:
        switch (dsl::type_of(e.value)) {
          case dsl::ValueType::integer: {
            const auto x = std::get<std::int64_t>(e.value);
            v.k = AVal::K::interval;
            v.iv = {x, x};
            break;
          }
          case dsl::ValueType::fixed: v.k = AVal::K::fixed; v.fx = std::get<Fixed1>(e.value); break;
          case dsl::ValueType::string: v.k = AVal::K::str; v.s = std::get<std::string>(e.value); break;
          case dsl::ValueType::string_set:
            v.k = AVal::K::set;
            v.must = v.may = std::get<dsl::StringSet>(e.value);
            break;
          case dsl::ValueType::boolean: v.k = AVal::K::boolean; v.b = tri_of(std::get<bool>(e.value)); break;
        }
        return v;
      case NodeKind::accessor: return accessor(e);
      case NodeKind::arith: {
        const AVal a = value(e.lhs()), b = value(e.rhs());
        if (a.k != AVal::K::interval || b.k != AVal::K::interval) return v;
        v.k = AVal::K::interval;
        switch (e.arith) {
          case dsl::ArithOp::add: v.iv = {a.iv.lo + b.iv.lo, a.iv.hi + b.iv.hi}; break;
          case dsl::ArithOp::sub: v.iv = {a.iv.lo - b.iv.hi, a.iv.hi - b.iv.lo}; break;
          case dsl::ArithOp::mul: {
            const std::int64_t p[] = {a.iv.lo * b.iv.lo, a.iv.lo * b.iv.hi, a.iv.hi * b.iv.lo, a.iv.hi * b.iv.hi};
            v.iv = {*std::min_element(std::begin(p), std::end(p)), *std::max_element(std::begin(p), std::end(p))};
            break;
          }
        }
        return v;
      }
      default:
        v.k = AVal::K::boolean;
        v.b = pred(e);
        return v;
    }
  }

  AVal accessor(const dsl::Expr& e) {
    using dsl::Head;
    AVal v;
    switch (e.head) {
      case Head::days: {
        const auto n = static_cast<std::int64_t>(query_.dates.size());
        v.k = AVal::K::interval;
        v.iv = {n, n};
        return v;
      }
      case Head::people_number:
        v.k = AVal::K::interval;
        v.iv = {query_.people, query_.people};
        return v;
      case Head::total_budget:
      case Head::cost_of: {
        std::optional<PoiKind> kind;
        if (e.head == Head::cost_of) {
          kind = kPoiKindNames.find(e.arg);
          if (!kind) {
            v.k = AVal::K::interval;
            return v;
          }
        }
        const Bounds a = assigned_cost(kind);
        const Bounds rest = kind ? suf_kind_[assigned_][static_cast<std::size_t>(*kind)] : suf_total_[assigned_];
        v.k = AVal::K::interval;
        v.iv = {a.lo + rest.lo, a.hi + rest.hi};
        return v;
      }
      case Head::room_types:
      case Head::house_rules:
      case Head::transport_modes:
      case Head::cuisines: {
        prepare_must();
        const auto h = set_head(e.head);
        v.k = AVal::K::set;
        v.must.assign(must_[h].begin(), must_[h].end());
        std::set<std::string> may = must_[h];
        may.insert(suf_sets_[assigned_][h].begin(), suf_sets_[assigned_][h].end());
        v.may.assign(may.begin(), may.end());
        return v;
      }
      case Head::visited_cities:
        v.k = AVal::K::set;
        v.must = v.may = visited_cities_;
        return v;
      case Head::rating_of: {
        const auto* r = catalog_.find_by_ref(e.arg);
        if (r && r->rating) {
          v.k = AVal::K::fixed;
          v.fx = *r->rating;
        }
        return v;
      }
      case Head::poi_visited: {
        v.k = AVal::K::boolean;
        for (std::size_t i = 0; i < assigned_; ++i)
          if (matches_ref(*(*chosen_)[i], e.arg)) {
            v.b = Tri::yes;
            return v;
          }
        v.b = ref_suffix(e.arg)[assigned_] ? Tri::maybe : Tri::no;
        return v;
      }
    }
    return v;
  }

  static Tri compare_intervals(dsl::CmpOp op, Bounds a, Bounds b) {
    const std::int64_t lo = a.lo - b.hi, hi = a.hi - b.lo;  // range of a - b
    switch (op) {
      case dsl::CmpOp::lt: return hi < 0 ? Tri::yes : (lo >= 0 ? Tri::no : Tri::maybe);
      case dsl::CmpOp::le: return hi <= 0 ? Tri::yes : (lo > 0 ? Tri::no : Tri::maybe);
      case dsl::CmpOp::gt: return lo > 0 ? Tri::yes : (hi <= 0 ? Tri::no : Tri::maybe);
      case dsl::CmpOp::ge: return lo >= 0 ? Tri::yes : (hi < 0 ? Tri::no : Tri::maybe);
      case dsl::CmpOp::eq: return (lo == 0 && hi == 0) ? Tri::yes : ((hi < 0 || lo > 0) ? Tri::no : Tri::maybe);
      case dsl::CmpOp::ne: return tri_not(compare_intervals(dsl::CmpOp::eq, a, b));
    }
    return Tri::maybe;
  }

  static bool subset(const dsl::StringSet& a, const dsl::StringSet& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
  }

  static Tri compare_values(dsl::CmpOp op, const AVal& a, const AVal& b) {
    using K = AVal::K;
    if (a.k == K::undefined || b.k == K::undefined || a.k != b.k) return Tri::no;
    switch (a.k) {
      case K::interval: return compare_intervals(op, a.iv, b.iv);
      case K::fixed: return tri_of(dsl::apply_cmp(op, a.fx, b.fx));
      case K::str: return tri_of(dsl::apply_cmp(op, a.s, b.s));
      case K::boolean:
        if (a.b == Tri::maybe || b.b == Tri::maybe) return Tri::maybe;
        return tri_of(dsl::apply_cmp(op, a.b == Tri::yes, b.b == Tri::yes));
      case K::set: {
        // the final sets satisfy must <= final <= may
        const bool a_exact = a.must == a.may, b_exact = b.must == b.may;
        Tri eq;
        if (a_exact && b_exact) eq = tri_of(a.must == b.must);
        else if (!subset(a.must, b.may) || !subset(b.must, a.may)) eq = Tri::no;
        else eq = Tri::maybe;
        if (op == dsl::CmpOp::eq) return eq;
        if (op == dsl::CmpOp::ne) return tri_not(eq);
        return Tri::no;
      }
      case K::undefined: return Tri::no;
    }
    return Tri::maybe;
  }

  Tri pred(const dsl::Expr& e) {
    using dsl::NodeKind;
    switch (e.kind) {
      case NodeKind::literal: return tri_of(std::get<bool>(e.value));
      case NodeKind::accessor: {
        const AVal v = accessor(e);
        return v.k == AVal::K::boolean ? v.b : Tri::no;
      }
      case NodeKind::compare: return compare_values(e.cmp, value(e.lhs()), value(e.rhs()));
      case NodeKind::membership: {
        const AVal x = value(e.lhs()), s = value(e.rhs());
        if (x.k != AVal::K::str || s.k != AVal::K::set) return Tri::no;
        Tri in = Tri::maybe;
        if (std::binary_search(s.must.begin(), s.must.end(), x.s)) in = Tri::yes;
        else if (!std::binary_search(s.may.begin(), s.may.end(), x.s)) in = Tri::no;
        return e.negated ? tri_not(in) : in;
      }
      case NodeKind::conjunction: {
        Tri t = Tri::yes;
        for (const auto& c : e.children) {
          t = tri_and(t, pred(c));
          if (t == Tri::no) break;
        }
        return t;
      }
      case NodeKind::disjunction: {
        Tri t = Tri::no;
        for (const auto& c : e.children) {
          t = tri_or(t, pred(c));
          if (t == Tri::yes) break;
        }
        return t;
      }
      case NodeKind::negation: return tri_not(pred(e.children[0]));
      case NodeKind::forall:
      case NodeKind::exists: {
        const bool all = e.kind == NodeKind::forall;
        const auto kind = kPoiKindNames.find(e.arg);
        Tri t = all ? Tri::yes : Tri::no;
        for (std::size_t i = 0; i < assigned_; ++i) {
          const PoiRecord* r = (*chosen_)[i];
          if (kind && r->kind != *kind) continue;
          const Tri v = tri_of(dsl::evaluate_item(e.children[0], r));
          t = all ? tri_and(t, v) : tri_or(t, v);
        }
        const Tri rest = quantifier_suffix(e)[assigned_];
        return all ? tri_and(t, rest) : tri_or(t, rest);
      }
      case NodeKind::result_wrap: return pred(e.children[0]);
      default: return Tri::no;
    }
  }

  const Query& query_;
  const PoiCatalog& catalog_;
  const std::vector<Slot>& slots_;

  std::vector<Bounds> suf_total_;
  std::vector<std::array<Bounds, kKinds>> suf_kind_;
  std::vector<std::array<std::set<std::string>, kSetHeads>> suf_sets_;
  dsl::StringSet visited_cities_;
  std::map<std::string, std::vector<char>> ref_cache_;
  std::map<const dsl::Expr*, std::vector<Tri>> quant_cache_;

  const std::vector<const PoiRecord*>* chosen_ = nullptr;
  std::size_t assigned_ = 0;
  std::array<std::set<std::string>, kSetHeads> must_;
  bool must_ready_ = false;
};

}  // namespace tripdiag::solver
