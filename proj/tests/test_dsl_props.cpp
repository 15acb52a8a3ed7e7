// SPDX-License-Identifier: Apache-2.0
#include <catch_amalgamated.hpp>

#include "support/dsl_oracle.hpp"

using namespace tripdiag;

TEST_CASE("reference evaluator agrees on hand-picked plans", "[dsl][props]") {
  const auto catalog = fixtures::property_catalog();
  Itinerary plan;
  plan.days.resize(2);
  plan.days[0].items = {{PoiKind::accommodation, "ac-1", {}, {}, 0, 2, {}}, {PoiKind::restaurant, "re-2", {}, {}, 0, 1, {}}};
  plan.days[1].items = {{PoiKind::flight, "fl-1", {}, {}, 0, 1, {}}, {PoiKind::attraction, "ghost", {}, {}, 0, 1, {}}};
  Query q;
  q.people = 2;
  const fixtures::ReferenceEvaluator ref(plan, catalog, 2);
  const char* holding[] = {
      "total_budget(plan) == 2 * 5000 + 2100 + 20000",
      "cost_of(plan, 'accommodation') == 10000",
      "'flight' in transport_modes(plan)",
      "room_types(plan) == {'entire home'}",
      "all_items(plan, 'attraction', item.price >= 0) == false or true",
      "not (all_items(plan, 'attraction', item.price >= 0))",
      "rating_of(plan, 'Corner Grill') == 2.5",
      "poi_visited(plan, 'F100')",
      "days(plan) == 2 and people_number(plan) == 2",
  };
  for (const char* text : holding) {
    INFO(text);
    const auto e = dsl::parse(text);
    CHECK(ref.holds(e));
    CHECK(dsl::evaluate(e, plan, catalog, q));
  }
}

TEST_CASE("randomized constraints agree with the reference evaluator", "[dsl][props]") {
  const auto t = fixtures::check_dsl_properties(10000, 20240301);
  for (const auto& ex : t.examples) UNSCOPED_INFO(ex);
  CHECK(t.pairs == 10000);
  CHECK(t.parse_failures == 0);
  CHECK(t.oracle_mismatches == 0);
  CHECK(t.negation_failures == 0);
  CHECK(t.idempotence_failures == 0);
  CHECK(t.canon_drift == 0);
  // both outcomes are well represented
  CHECK(t.held > 2000);
  CHECK(t.held < 8000);
}
