// SPDX-License-Identifier: Apache-2.0
#pragma once

// Information contexts handed to agents. The minimal context is exactly the
// records a reference plan uses; moderate and rich add 10 and 20 distractors
// per category (attraction, accommodation, restaurant) per visited city.
// Distractors come from one seeded shuffle per (category, city), so the
// moderate sample is always a prefix of the rich one.

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "tripdiag/core/catalog.hpp"
#include "tripdiag/core/rng.hpp"
#include "tripdiag/core/serialize.hpp"
#include "tripdiag/dsl/evaluate.hpp"
#include "tripdiag/solver/enumerate.hpp"

namespace tripdiag::context {

inline constexpr PoiKind kDistractorKinds[] = {PoiKind::attraction, PoiKind::accommodation, PoiKind::restaurant};

struct ContextSpec {
  ContextLevel level = ContextLevel::minimal;
  std::uint64_t seed = 0;

  int distractors() const {
    switch (level) {
      case ContextLevel::moderate: return 10;
      case ContextLevel::rich: return 20;
      default: return 0;
    }
  }
};

/// A (category, city) bucket whose pool could not supply the requested count.
struct Shortfall {
  PoiKind kind = PoiKind::attraction;
  std::string city;
  int requested = 0;
  int achieved = 0;

  friend bool operator==(const Shortfall&, const Shortfall&) = default;
};

struct BuildResult {
  InformationContext context;
  std::vector<Shortfall> shortfalls;
};

/// Where the distractor pool came from.
enum class PoolSource : std::uint8_t { enumeration, unary_filter, catalog };

struct DistractorPool {
  PoolSource source = PoolSource::catalog;
  std::vector<std::string> ids;  // sorted
};

/// Ids of catalog records a plan references, sorted; unknown ids are dropped.
inline std::vector<std::string> referenced_ids(const Itinerary& plan, const PoiCatalog& catalog) {
  std::set<std::string> out;
  for (const auto& d : plan.days)
    for (const auto& it : d.items)
      if (catalog.find(it.poi_id)) out.insert(it.poi_id);
  return {out.begin(), out.end()};
}

/// Cities where a plan stays, eats or sightsees, sorted.
inline std::vector<std::string> visited_cities(const Itinerary& plan, const PoiCatalog& catalog) {
  std::set<std::string> out;
  for (const auto& d : plan.days)
    for (const auto& it : d.items)
      if (const auto* r = catalog.find(it.poi_id))
        if (r->kind == PoiKind::accommodation || r->kind == PoiKind::restaurant || r->kind == PoiKind::attraction)
          out.insert(r->city);
  return {out.begin(), out.end()};
}

namespace detail {

inline std::uint64_t fnv1a(std::string_view s, std::uint64_t h = 1469598103934665603ULL) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

inline std::uint64_t bucket_seed(std::uint64_t seed, PoiKind kind, const std::string& city) {
  return fnv1a(city, fnv1a(to_string(kind), seed ^ 0xA5A5A5A5A5A5A5A5ULL));
}

// Whether a record can be ruled out on its own: it breaks an all_items body
// for its kind, or carries a tag a top-level `not in` constraint forbids.
inline bool passes_unary(const PoiRecord& r, const dsl::Expr& c) {
  using dsl::NodeKind;
  if (c.kind == NodeKind::conjunction) {
    for (const auto& ch : c.children)
      if (!passes_unary(r, ch)) return false;
    return true;
  }
  if (c.kind == NodeKind::forall && (c.arg == "any" || c.arg == to_string(r.kind)))
    return dsl::evaluate_item(c.children[0], &r);
  const dsl::Expr* m = nullptr;
  if (c.kind == NodeKind::membership && c.negated) m = &c;
  if (c.kind == NodeKind::negation && c.children[0].kind == NodeKind::membership && !c.children[0].negated)
    m = &c.children[0];
  if (!m || m->children[0].kind != NodeKind::literal || m->children[1].kind != NodeKind::accessor) return true;
  const auto& tag = std::get<std::string>(m->children[0].value);
  switch (m->children[1].head) {
    case dsl::Head::room_types: return !(r.room_type && *r.room_type == tag);
    case dsl::Head::house_rules: return std::find(r.house_rules.begin(), r.house_rules.end(), tag) == r.house_rules.end();
    case dsl::Head::cuisines: return std::find(r.cuisines.begin(), r.cuisines.end(), tag) == r.cuisines.end();
    default: return true;
  }
}

}  // namespace detail

/// Records of the distractor kinds in the query's destinations that survive
/// every unary constraint.
inline std::vector<std::string> unary_pool(const Query& q, const std::vector<dsl::Expr>& constraints,
                                           const PoiCatalog& catalog) {
  std::vector<std::string> out;
  for (const auto& r : catalog.records()) {
    if (std::find(std::begin(kDistractorKinds), std::end(kDistractorKinds), r.kind) == std::end(kDistractorKinds)) continue;
    if (std::find(q.destinations.begin(), q.destinations.end(), r.city) == q.destinations.end()) continue;
    if (std::all_of(constraints.begin(), constraints.end(), [&](const auto& c) { return detail::passes_unary(r, c); }))
      out.push_back(r.id);
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Candidates that appear in some satisfying plan when the plan space is at
/// most `cap`, otherwise the unary-filter pool.
inline DistractorPool distractor_pool(const Query& q, const std::vector<dsl::Expr>& constraints, const PoiCatalog& catalog,
                                      const solver::SlotPolicy& policy, std::uint64_t cap = 20000) {
  if (solver::plan_space(q, catalog, policy) <= cap)
    return {PoolSource::enumeration, solver::enumerate_all(q, constraints, catalog, cap, policy).pool};
  return {PoolSource::unary_filter, unary_pool(q, constraints, catalog)};
}

/// Builds the context for one case. `pool` restricts distractors; without it
/// every catalog record is eligible. Correction contexts need `faulty`.
inline BuildResult build(const std::string& case_id, const Itinerary& ref, const Itinerary* faulty,
                         const PoiCatalog& catalog, const ContextSpec& spec, const DistractorPool* pool = nullptr) {
  BuildResult out;
  out.context.case_id = case_id;
  out.context.level = spec.level;
  auto ids = referenced_ids(ref, catalog);
  if (spec.level == ContextLevel::correction) {
    if (!faulty) throw UsageError("a correction context needs the faulty plan");
    const auto extra = referenced_ids(*faulty, catalog);
    ids.insert(ids.end(), extra.begin(), extra.end());
    out.context.records = tripdiag::detail::sorted_unique(std::move(ids));
    return out;
  }
  const std::set<std::string> minimal(ids.begin(), ids.end());
  const int want = spec.distractors();
  if (want > 0) {
    std::set<std::string> allowed;
    if (pool) allowed.insert(pool->ids.begin(), pool->ids.end());
    for (const auto& city : visited_cities(ref, catalog))
      for (auto kind : kDistractorKinds) {
        std::vector<const PoiRecord*> bucket;
        for (const auto* r : catalog.in_city(kind, city))
          if (!minimal.count(r->id) && (!pool || allowed.count(r->id))) bucket.push_back(r);
        std::sort(bucket.begin(), bucket.end(), [](const auto* a, const auto* b) { return a->id < b->id; });
        std::mt19937_64 rng(detail::bucket_seed(spec.seed, kind, city));
        portable_shuffle(bucket, rng);
        const int take = std::min<int>(want, static_cast<int>(bucket.size()));
        for (int i = 0; i < take; ++i) ids.push_back(bucket[static_cast<std::size_t>(i)]->id);
        if (take < want) out.shortfalls.push_back({kind, city, want, take});
      }
  }
  out.context.records = tripdiag::detail::sorted_unique(std::move(ids));
  return out;
}

inline constexpr int kTokenDivisor = 4;
inline constexpr std::size_t kTokenWarnThreshold = 64000;

/// Size estimate of the hydrated context: characters of the record JSON
/// divided by four.
inline std::size_t token_estimate(const InformationContext& ctx, const PoiCatalog& catalog) {
  std::size_t chars = 0;
  for (const auto& id : ctx.records)
    if (const auto* r = catalog.find(id)) chars += to_json(*r).dump().size();
  return chars / kTokenDivisor;
}

inline bool exceeds_token_budget(std::size_t estimate) { return estimate > kTokenWarnThreshold; }

/// Full records for agent prompts.
inline json hydrate(const InformationContext& ctx, const PoiCatalog& catalog) {
  json recs = json::array();
  for (const auto& id : ctx.records)
    if (const auto* r = catalog.find(id)) recs.push_back(to_json(*r));
  return json{{"case_id", ctx.case_id}, {"level", to_string(ctx.level)}, {"records", recs}};
}

inline json to_json(const Shortfall& s) {
  return json{{"kind", to_string(s.kind)}, {"city", s.city}, {"requested", s.requested}, {"achieved", s.achieved}};
}

}  // namespace tripdiag::context
