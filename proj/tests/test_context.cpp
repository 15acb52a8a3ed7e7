// SPDX-License-Identifier: Apache-2.0
#include <catch_amalgamated.hpp>

#include "support/fixtures.hpp"
#include "support/random_trip.hpp"
#include "tripdiag/context/builder.hpp"

using namespace tripdiag;
using namespace tripdiag::context;
using namespace fixtures;

namespace {

// 30 of each distractor kind in Ashford, 5 attractions in Belmont, plus legs.
PoiCatalog city_catalog() {
  std::vector<PoiRecord> v;
  v.push_back(flight("F-out", "Home", "Ashford", "2024-03-01 08:00", 10000));
  v.push_back(flight("F-back", "Ashford", "Home", "2024-03-03 18:00", 10000));
  for (int i = 0; i < 30; ++i) {
    const auto n = std::to_string(100 + i);
    v.push_back(hotel("H" + n, "Ashford", 5000 + i * 100, i % 2 ? "private room" : "entire home"));
    v.push_back(restaurant("R" + n, "Ashford", 1000 + i * 10, {"italian"}, 30 + i % 20));
    v.push_back(attraction("A" + n, "Ashford", i * 50));
  }
  for (int i = 0; i < 5; ++i) v.push_back(attraction("B" + std::to_string(i), "Belmont", 0));
  return PoiCatalog(v);
}

// Three days in Ashford touching 9 distinct records.
Itinerary ref_plan() {
  const auto q = query("Home", {"Ashford"}, "2024-03-01", 3);
  Itinerary p;
  p.days = {DayPlan{q.dates[0], {item(PoiKind::flight, "F-out"), item(PoiKind::attraction, "A100"),
                                 item(PoiKind::restaurant, "R100"), item(PoiKind::accommodation, "H100")}},
            DayPlan{q.dates[1], {item(PoiKind::attraction, "A101"), item(PoiKind::restaurant, "R101"),
                                 item(PoiKind::accommodation, "H100")}},
            DayPlan{q.dates[2], {item(PoiKind::attraction, "A102"), item(PoiKind::restaurant, "R102"),
                                 item(PoiKind::flight, "F-back")}}};
  return p;
}

std::size_t count_kind(const InformationContext& c, const PoiCatalog& cat, PoiKind k) {
  return static_cast<std::size_t>(
      std::count_if(c.records.begin(), c.records.end(), [&](const auto& id) { return cat.find(id)->kind == k; }));
}

bool subset(const InformationContext& a, const InformationContext& b) {
  return std::includes(b.records.begin(), b.records.end(), a.records.begin(), a.records.end());
}

}  // namespace

TEST_CASE("minimal context is the reference plan's records", "[context]") {
  const auto cat = city_catalog();
  const auto r = build("c1", ref_plan(), nullptr, cat, {ContextLevel::minimal, 1});
  CHECK(r.context.records.size() == 9);
  CHECK(r.context.records == referenced_ids(ref_plan(), cat));
  CHECK(r.shortfalls.empty());
}

TEST_CASE("distractor counts and the subset chain", "[context]") {
  const auto cat = city_catalog();
  const auto p = ref_plan();
  for (std::uint64_t seed : {1u, 2u, 99u}) {
    const auto mn = build("c1", p, nullptr, cat, {ContextLevel::minimal, seed}).context;
    const auto md = build("c1", p, nullptr, cat, {ContextLevel::moderate, seed});
    const auto rc = build("c1", p, nullptr, cat, {ContextLevel::rich, seed});
    CHECK(md.context.records.size() == 9 + 30);
    CHECK(rc.context.records.size() == 9 + 60);
    CHECK(count_kind(md.context, cat, PoiKind::attraction) == 3 + 10);
    CHECK(count_kind(rc.context, cat, PoiKind::accommodation) == 1 + 20);
    CHECK(count_kind(rc.context, cat, PoiKind::restaurant) == 3 + 20);
    CHECK(subset(mn, md.context));
    CHECK(subset(md.context, rc.context));
    CHECK(md.shortfalls.empty());
    CHECK(rc.shortfalls.empty());
    CHECK(build("c1", p, nullptr, cat, {ContextLevel::rich, seed}).context == rc.context);
  }
  CHECK(build("c1", p, nullptr, cat, {ContextLevel::rich, 1}).context !=
        build("c1", p, nullptr, cat, {ContextLevel::rich, 2}).context);
}

TEST_CASE("small pools are reported, not hidden", "[context]") {
  const auto cat = city_catalog();
  DistractorPool pool{PoolSource::unary_filter, {"A110", "A111", "H110", "R110", "R111", "R112"}};
  const auto r = build("c1", ref_plan(), nullptr, cat, {ContextLevel::moderate, 5}, &pool);
  CHECK(r.context.records.size() == 9 + 6);
  REQUIRE(r.shortfalls.size() == 3);
  CHECK(r.shortfalls[0] == Shortfall{PoiKind::attraction, "Ashford", 10, 2});
  CHECK(r.shortfalls[1] == Shortfall{PoiKind::accommodation, "Ashford", 10, 1});
  CHECK(r.shortfalls[2] == Shortfall{PoiKind::restaurant, "Ashford", 10, 3});
}

TEST_CASE("correction context joins the faulty and reference plans", "[context]") {
  const auto cat = city_catalog();
  auto faulty = ref_plan();
  faulty.days[1].items[0].poi_id = "A120";
  faulty.days[2].items[0].poi_id = "ghost";
  const auto r = build("c1", ref_plan(), &faulty, cat, {ContextLevel::correction, 0});
  CHECK(r.context.records.size() == 10);
  CHECK(std::binary_search(r.context.records.begin(), r.context.records.end(), "A120"));
  CHECK_FALSE(std::binary_search(r.context.records.begin(), r.context.records.end(), "ghost"));
  CHECK_THROWS_AS(build("c1", ref_plan(), nullptr, cat, {ContextLevel::correction, 0}), UsageError);
}

TEST_CASE("unary pool drops records a single constraint rules out", "[context]") {
  const auto cat = city_catalog();
  const auto q = query("Home", {"Ashford"}, "2024-03-01", 3);
  const std::vector<dsl::Expr> cs{dsl::parse("'private room' not in room_types(plan)"),
                                  dsl::parse("all_items(plan, 'restaurant', item.rating >= 4.5)"),
                                  dsl::parse("total_budget(plan) <= 100000")};
  const auto pool = unary_pool(q, cs, cat);
  std::size_t hotels = 0, rests = 0, sights = 0;
  for (const auto& id : pool) {
    const auto* r = cat.find(id);
    if (r->kind == PoiKind::accommodation) {
      ++hotels;
      CHECK(r->room_type == "entire home");
    }
    if (r->kind == PoiKind::restaurant) {
      ++rests;
      CHECK(r->rating->tenths >= 45);
    }
    if (r->kind == PoiKind::attraction) ++sights;
  }
  CHECK(hotels == 15);
  CHECK(rests == 5);
  CHECK(sights == 30);
}

TEST_CASE("enumeration pool on a tractable trip", "[context]") {
  const auto t = random_trip(7);
  const auto pool = distractor_pool(t.query, t.constraints, t.catalog, t.policy);
  CHECK(pool.source == PoolSource::enumeration);
  CHECK(pool.ids == solver::enumerate_all(t.query, t.constraints, t.catalog, 1'000'000, t.policy).pool);
  const auto big = distractor_pool(t.query, t.constraints, t.catalog, t.policy, 0);
  CHECK(big.source == PoolSource::unary_filter);
}

TEST_CASE("token estimate", "[context]") {
  const auto cat = city_catalog();
  CHECK(token_estimate(InformationContext{}, cat) == 0);

  PoiRecord r = attraction("X", "Ashford", 0);
  const auto base = to_json(r).dump().size();
  r.name += std::string(400 - base, 'x');
  REQUIRE(to_json(r).dump().size() == 400);
  CHECK(token_estimate(InformationContext{"c", {"X"}, ContextLevel::minimal}, PoiCatalog({r})) == 100);

  std::vector<PoiRecord> v;
  InformationContext ctx{"ct", {}, ContextLevel::minimal};
  for (int i = 0; i < 30; ++i) v.push_back(at(attraction("P" + std::to_string(i), "Chengdu", 0), i * 300, i * 170));
  for (int i = 0; i < 30; ++i)
    for (int j = 0; j < 30; ++j)
      for (const std::string mode : {"metro", "taxi", "walk"}) {
      if (i == j) continue;
      PoiRecord l;
      l.id = "L" + std::to_string(i) + "-" + std::to_string(j) + "-" + mode;
      l.kind = PoiKind::innercity_transit;
      l.city = l.origin = l.destination = "Chengdu";
      l.name = mode + " from P" + std::to_string(i) + " to P" + std::to_string(j);
      l.mode = mode;
      l.from_poi = "P" + std::to_string(i);
      l.to_poi = "P" + std::to_string(j);
      l.price = 300 + 10 * std::abs(i - j);
      l.duration_min = 5 + 2 * std::abs(i - j);
      v.push_back(l);
    }
  for (const auto& x : v) ctx.records.push_back(x.id);
  std::sort(ctx.records.begin(), ctx.records.end());
  const auto est = token_estimate(ctx, PoiCatalog(v));
  INFO("estimate " << est);
  CHECK(exceeds_token_budget(est));
}
