// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "tripdiag/dsl/canonicalize.hpp"
#include "tripdiag/dsl/evaluate.hpp"

namespace tripdiag::solver {

/// Structural findings only: hallucinated ids, repeated visits, broken
/// transit chains.
inline std::vector<ErrorFinding> structural_findings(const Itinerary& plan, const PoiCatalog& catalog, const Query& query) {
  std::vector<ErrorFinding> out;
  std::set<std::string> seen_visits;
  std::set<std::string> reported_repeats;
  std::vector<std::string> arrivals;
  std::string current = query.origin;
  bool chain_broken = false;
  bool unresolved_leg = false;

  auto transit = [&](std::optional<Locus> at, std::string detail) {
    if (chain_broken) return;
    chain_broken = true;
    out.push_back({FindingCategory::transit_continuity, std::nullopt, at, std::move(detail)});
  };

  for (std::size_t d = 0; d < plan.days.size(); ++d) {
    const auto& day = plan.days[d];
    const PoiRecord* last_leg = nullptr;
    for (std::size_t i = 0; i < day.items.size(); ++i) {
      const auto& item = day.items[i];
      const Locus at{d, i};
      const PoiRecord* r = catalog.resolve(item.poi_id, item.kind);
      if (!r) {
        const PoiRecord* other = catalog.find(item.poi_id);
        out.push_back({FindingCategory::hallucinated_poi, std::nullopt, at,
                       other ? "'" + item.poi_id + "' is a " + std::string(to_string(other->kind)) + ", not a " +
                                   std::string(to_string(item.kind))
                             : "unknown id '" + item.poi_id + "'"});
        unresolved_leg = unresolved_leg || is_intercity_leg(item.kind);
        continue;
      }
      if (item.kind == PoiKind::attraction || item.kind == PoiKind::event) {
        if (!seen_visits.insert(r->id).second && reported_repeats.insert(r->id).second)
          out.push_back({FindingCategory::repeated_activity, std::nullopt, at, "'" + r->id + "' visited more than once"});
      }
      if (is_intercity_leg(r->kind)) {
        if (r->origin != current) transit(at, "leg " + r->id + " departs " + r->origin + " but the traveller is in " + current);
        if (r->depart && r->depart->date != day.date)
          transit(at, "leg " + r->id + " departs on " + r->depart->date.str() + ", not " + day.date.str());
        if (last_leg && last_leg->arrive && r->depart && r->depart < last_leg->arrive)
          transit(at, "leg " + r->id + " departs before " + last_leg->id + " arrives");
        last_leg = r;
        arrivals.push_back(r->destination);
        current = r->destination;
      } else if (r->kind == PoiKind::innercity_transit) {
        if (r->city != current) transit(at, "local leg " + r->id + " is in " + r->city + ", traveller is in " + current);
      } else if (r->city != current) {
        transit(at, "'" + r->id + "' is in " + r->city + " but the traveller is in " + current);
      }
    }
  }
  std::vector<std::string> expected(query.destinations.begin(), query.destinations.end());
  expected.push_back(query.origin);
  if (!chain_broken && !unresolved_leg && arrivals != expected) {
    std::string route;
    for (const auto& a : arrivals) route += (route.empty() ? "" : " -> ") + a;
    transit(std::nullopt, "route " + query.origin + " -> " + (route.empty() ? "(no legs)" : route) +
                              " does not visit the destinations in order and return");
  }
  return out;
}

/// Every finding for a plan: structural ones followed by one per violated
/// constraint, categorised by the constraint's head. Empty iff the plan is
/// fully valid.
inline std::vector<ErrorFinding> verify(const Itinerary& plan, const std::vector<dsl::Expr>& constraints,
                                        const PoiCatalog& catalog, const Query& query) {
  auto out = structural_findings(plan, catalog, query);
  const dsl::Evaluator ev(plan, catalog, query);
  for (const auto& c : constraints)
    if (!ev.holds(c)) out.push_back({dsl::category_of(c), dsl::canonical_text(c), std::nullopt, "constraint not satisfied"});
  return out;
}

inline std::set<FindingCategory> categories(const std::vector<ErrorFinding>& findings) {
  std::set<FindingCategory> out;
  for (const auto& f : findings) out.insert(f.category);
  return out;
}

}  // namespace tripdiag::solver
