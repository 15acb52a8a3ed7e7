// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "tripdiag/core/catalog.hpp"

namespace tripdiag {

struct CostResult {
  Itinerary plan;
  std::vector<Locus> unresolved;  // items whose poi_id does not resolve
};

/// Overwrites each unit_cost with the catalog price and recomputes the total.
/// Unresolvable items keep unit_cost 0 and are listed, never rejected.
inline CostResult recompute_costs(Itinerary plan, const PoiCatalog& catalog) {
  CostResult out;
  Money total = 0;
  for (std::size_t d = 0; d < plan.days.size(); ++d) {
    for (std::size_t i = 0; i < plan.days[d].items.size(); ++i) {
      auto& item = plan.days[d].items[i];
      if (const auto* rec = catalog.resolve(item.poi_id, item.kind)) {
        item.unit_cost = rec->price;
      } else {
        item.unit_cost = 0;
        out.unresolved.push_back({d, i});
      }
      total += item.unit_cost * item.quantity;
    }
  }
  plan.total_cost = total;
  out.plan = std::move(plan);
  return out;
}

}  // namespace tripdiag
