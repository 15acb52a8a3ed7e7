// SPDX-License-Identifier: Apache-2.0
#pragma once

// Brute-force reference for the search: walks the full Cartesian product of
// slot candidates with no pruning and keeps the plans the verifier accepts.

#include <set>
#include <string>
#include <vector>

#include "tripdiag/solver/slots.hpp"
#include "tripdiag/solver/verify.hpp"

namespace tripdiag::solver {

class CapExceeded : public Error {
public:
  using Error::Error;
};

struct Enumeration {
  std::vector<Itinerary> plans;   // canonical order: skeleton, then candidate order per slot
  std::vector<std::string> pool;  // ids appearing in some satisfying plan, sorted
  std::uint64_t raw_space = 0;    // size of the unfiltered product
};

/// Size of the unfiltered plan space; saturates at UINT64_MAX.
inline std::uint64_t plan_space(const Query& q, const PoiCatalog& catalog, const SlotPolicy& policy) {
  std::uint64_t total = 0;
  for (const auto& sk : day_skeletons(q.dates.size(), q.destinations.size())) {
    std::uint64_t prod = 1;
    for (const auto& s : build_slots(q, sk, catalog, policy)) {
      const std::uint64_t n = s.candidates.size();
      if (n != 0 && prod > UINT64_MAX / n) return UINT64_MAX;
      prod *= n;
    }
    if (total > UINT64_MAX - prod) return UINT64_MAX;
    total += prod;
  }
  return total;
}

/// Every plan satisfying all constraints. Throws CapExceeded when the raw
/// space is larger than `cap`.
inline Enumeration enumerate_all(const Query& q, const std::vector<dsl::Expr>& constraints, const PoiCatalog& catalog,
                                 std::uint64_t cap, const SlotPolicy& policy) {
  Enumeration out;
  out.raw_space = plan_space(q, catalog, policy);
  if (out.raw_space > cap)
    throw CapExceeded("plan space of " + std::to_string(out.raw_space) + " exceeds the cap of " + std::to_string(cap));
  std::set<std::string> pool;
  for (const auto& sk : day_skeletons(q.dates.size(), q.destinations.size())) {
    const auto slots = build_slots(q, sk, catalog, policy);
    std::vector<const PoiRecord*> chosen(slots.size(), nullptr);
    auto rec = [&](auto&& self, std::size_t i) -> void {
      if (i == slots.size()) {
        Itinerary p = assemble(q, slots, chosen, q.people);
        if (verify(p, constraints, catalog, q).empty()) {
          for (const auto* r : chosen) pool.insert(r->id);
          out.plans.push_back(std::move(p));
        }
        return;
      }
      for (const PoiRecord* r : slots[i].candidates) {
        chosen[i] = r;
        self(self, i + 1);
      }
    };
    rec(rec, 0);
  }
  out.pool.assign(pool.begin(), pool.end());
  return out;
}

}  // namespace tripdiag::solver
