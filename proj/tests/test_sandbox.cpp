// SPDX-License-Identifier: Apache-2.0
#include <catch_amalgamated.hpp>

#include "support/fixtures.hpp"
#include "tripdiag/sandbox.hpp"

using namespace tripdiag;
using namespace tripdiag::sandbox;
using namespace fixtures;

namespace {

PoiCatalog lodging_catalog() {
  std::vector<PoiRecord> v;
  const Money prices[] = {25000, 39900, 40000, 40001, 52000, 18000, 40000, 61000, 33000, 45000};
  for (int i = 0; i < 10; ++i) v.push_back(hotel("acc-" + std::to_string(i), "Hangzhou", prices[i]));
  v.push_back(hotel("acc-x", "Shanghai", 100));
  return PoiCatalog(v);
}

std::vector<std::string> ids(const ToolResult& r) {
  std::vector<std::string> out;
  for (const auto& rec : r.records) out.push_back(rec.id);
  return out;
}

}  // namespace

TEST_CASE("profile tool families", "[sandbox][registry]") {
  const auto tp = register_profile(Profile::tp_like);
  REQUIRE(tp.size() == 5);
  CHECK(tp[0].name == "FlightSearch");
  CHECK(tp[4].name == "DistanceMatrix");
  const auto tc = register_profile(Profile::tc_like);
  CHECK(tc.size() == 6);
  const auto ct = register_profile(Profile::ct_like);
  std::vector<std::string> names;
  for (const auto& t : ct) names.push_back(t.name);
  CHECK(std::count(names.begin(), names.end(), "intercity_transport_select") == 1);
  CHECK(std::count(names.begin(), names.end(), "goto") == 1);
  CHECK(registry_manifest() == registry_manifest());
  for (auto p : {Profile::tp_like, Profile::tc_like, Profile::ct_like}) {
    auto a = register_profile(p);
    auto b = register_profile(p);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(to_json(a[i]) == to_json(b[i]));
  }
}

TEST_CASE("FlightSearch returns seeded matches by departure", "[sandbox][invoke]") {
  const PoiCatalog cat({flight("f-2", "Washington", "Myrtle Beach", "2022-03-13 15:00", 20000),
                        flight("f-1", "Washington", "Myrtle Beach", "2022-03-13 08:30", 30000),
                        flight("f-3", "Washington", "Myrtle Beach", "2022-03-14 08:30", 10000),
                        flight("f-4", "Myrtle Beach", "Washington", "2022-03-13 09:00", 10000),
                        hotel("h-1", "Myrtle Beach", 100)});
  const auto r = invoke(parse_call_text(R"(FlightSearch("Washington", "Myrtle Beach", "2022-03-13"))"), cat);
  REQUIRE(r.ok());
  CHECK(ids(r) == std::vector<std::string>{"f-1", "f-2"});
  CHECK(ids(invoke(parse_call_text(R"(FlightSearch("washington", "MYRTLE  beach", "2022/3/13"))"), cat)) == ids(r));
}

TEST_CASE("invoke errors", "[sandbox][invoke]") {
  const auto cat = lodging_catalog();
  auto r = invoke(parse_call_text(R"(AccommodationSearch("Atlantis"))"), cat);
  REQUIRE_FALSE(r.ok());
  CHECK(r.error->kind == ToolErrorKind::unknown_city);
  CHECK(invoke(parse_call_text(R"(Teleport("Atlantis"))"), cat).error->kind == ToolErrorKind::unknown_tool);
  CHECK(invoke(parse_call_text(R"(AccommodationSearch())"), cat).error->kind == ToolErrorKind::bad_arguments);
  CHECK(invoke(parse_call_text(R"(AccommodationSearch("Hangzhou", "x"))"), cat).error->kind == ToolErrorKind::bad_arguments);
  CHECK(invoke(parse_call_text(R"(accommodations_select("Hangzhou", "price", "lambda x: x <="))"), cat).error->kind ==
        ToolErrorKind::bad_filter);
  CHECK(invoke(parse_call_text(R"(accommodations_select("Hangzhou", "colour", "lambda x: x == 'red'"))"), cat).error->kind ==
        ToolErrorKind::bad_filter);
}

TEST_CASE("accommodations_select price filter matches a linear scan", "[sandbox][invoke]") {
  const auto cat = lodging_catalog();
  const auto r = invoke(parse_call_text(R"(accommodations_select("Hangzhou", "price", "lambda x: x <= 400"))"), cat);
  REQUIRE(r.ok());
  std::vector<std::string> expect;
  std::vector<const PoiRecord*> scan;
  for (const auto& rec : cat.records())
    if (rec.kind == PoiKind::accommodation && rec.city == "Hangzhou" && rec.price <= 40000) scan.push_back(&rec);
  std::sort(scan.begin(), scan.end(), [](auto a, auto b) { return a->price != b->price ? a->price < b->price : a->id < b->id; });
  for (auto* s : scan) expect.push_back(s->id);
  CHECK(ids(r) == expect);
  CHECK(r.records.size() == 6);
  const auto f = parse_filter("price", "lambda x: x <= 400");
  for (const auto& rec : r.records) CHECK(f.accepts(rec));
}

TEST_CASE("filters: ranges, decimals, ratings", "[sandbox][filter]") {
  const auto range = parse_filter("price", "lambda x: 50 <= x <= 100");
  CHECK(range.accepts(hotel("a", "c", 5000)));
  CHECK(range.accepts(hotel("a", "c", 10000)));
  CHECK_FALSE(range.accepts(hotel("a", "c", 10001)));
  CHECK(parse_filter("price", "lambda x: x < 99.5").accepts(hotel("a", "c", 9949)));
  CHECK_FALSE(parse_filter("price", "lambda x: x < 99.5").accepts(hotel("a", "c", 9950)));
  CHECK(parse_filter("rating", "lambda x: x >= 4.5").accepts(attraction("a", "c", 0, 45)));
  CHECK_FALSE(parse_filter("rating", "lambda x: x >= 4.5").accepts(attraction("a", "c", 0, 44)));
  CHECK(parse_filter("cuisine", "lambda c: 'Thai' in c").accepts(restaurant("r", "c", 0, {"Thai"})));
  CHECK(parse_filter("price", "lambda x: x <= 400").canonical() == parse_filter("cost", "lambda y: 400 >= y").canonical());
  CHECK_THROWS_AS(parse_filter("price", "lambda x: x <= 4 and item.rating >= 3.0"), UsageError);
}

TEST_CASE("restaurants_nearby orders by distance", "[sandbox][invoke]") {
  const PoiCatalog cat({at(named(attraction("a-1", "Hangzhou", 0), "West Lake"), 0, 0),
                        at(restaurant("r-1", "Hangzhou", 100), 1500, 0), at(restaurant("r-2", "Hangzhou", 100), 300, 400),
                        at(restaurant("r-3", "Hangzhou", 100), 0, 2500), at(restaurant("r-4", "Hangzhou", 100), 0, -500)});
  const auto r = invoke(parse_call_text(R"(restaurants_nearby("Hangzhou", "West Lake", 5, 2))"), cat);
  REQUIRE(r.ok());
  CHECK(ids(r) == std::vector<std::string>{"r-2", "r-4", "r-1"});
  CHECK(ids(invoke(parse_call_text(R"(restaurants_nearby("Hangzhou", "West Lake", 1, 2))"), cat)) ==
        std::vector<std::string>{"r-2"});
}

TEST_CASE("intercity_transport_select and goto", "[sandbox][invoke]") {
  PoiRecord inner;
  inner.id = "in-1";
  inner.kind = PoiKind::innercity_transit;
  inner.city = inner.origin = inner.destination = "Hangzhou";
  inner.mode = "taxi";
  inner.from_poi = "a-1";
  inner.to_poi = "a-2";
  inner.price = 3000;
  const PoiCatalog cat({leg("t-1", "Shanghai", "Hangzhou", "train", "2024-05-01 07:30", 5000),
                        leg("t-2", "Shanghai", "Hangzhou", "train", "2024-05-01 09:00", 5000),
                        flight("f-1", "Shanghai", "Hangzhou", "2024-05-01 10:00", 50000),
                        named(attraction("a-1", "Hangzhou", 0), "West Lake"),
                        named(attraction("a-2", "Hangzhou", 0), "Lingyin Temple"), inner});
  CHECK(ids(invoke(parse_call_text(R"(intercity_transport_select("Shanghai", "Hangzhou", "train", "08:00"))"), cat)) ==
        std::vector<std::string>{"t-2"});
  CHECK(ids(invoke(parse_call_text(R"(intercity_transport_select("Shanghai", "Hangzhou", "airplane", "8:00"))"), cat)) ==
        std::vector<std::string>{"f-1"});
  CHECK(ids(invoke(parse_call_text(R"(goto("Hangzhou", "West Lake", "Lingyin Temple", "10:00", "taxi"))"), cat)) ==
        std::vector<std::string>{"in-1"});
  CHECK(invoke(parse_call_text(R"(goto("Hangzhou", "West Lake", "Lingyin Temple", "10:00", "metro"))"), cat).records.empty());
}

TEST_CASE("invoke is deterministic", "[sandbox][invoke]") {
  const auto cat = lodging_catalog();
  const auto call = parse_call_text(R"(AccommodationSearch("Hangzhou"))");
  const auto a = invoke(call, cat);
  const auto b = invoke(call, cat);
  CHECK(a.records == b.records);
  CHECK(a.records.front().price == 18000);
}

TEST_CASE("validate_call verdicts", "[sandbox][validate]") {
  const auto gold = parse_call_text(R"(FlightSearch("Washington", "Myrtle Beach", "2022-03-13"))");
  SECTION("identical") {
    const auto r = validate_call(gold, gold);
    CHECK(r.tool_ok);
    CHECK(r.params_ok);
    CHECK(r.overall_ok);
  }
  SECTION("surface variation") {
    const auto r = validate_call(
        parse_call_text(R"(flight_search(origin="washington", destination="Myrtle Beach ", date="2022/3/13"))"), gold);
    CHECK(r.overall_ok);
  }
  SECTION("wrong date") {
    const auto r = validate_call(parse_call_text(R"(FlightSearch("Washington", "Myrtle Beach", "2022-03-14"))"), gold);
    CHECK(r.tool_ok);
    CHECK_FALSE(r.params_ok);
    CHECK_FALSE(r.overall_ok);
  }
  SECTION("clock and filter normalization") {
    const auto g = parse_call_text(R"(intercity_transport_select("Shanghai", "Hangzhou", "train", "08:00"))");
    CHECK(validate_call(parse_call_text(R"(intercity_transport_select("shanghai", "Hangzhou", "rail", "8:00"))"), g).overall_ok);
    const auto h = parse_call_text(R"(accommodations_select("Hangzhou", "price", "lambda x: x <= 400"))");
    CHECK(validate_call(parse_call_text(R"(accommodations_select("Hangzhou", "price", "lambda x: 400 >= x"))"), h).overall_ok);
    CHECK_FALSE(validate_call(parse_call_text(R"(accommodations_select("Hangzhou", "price", "lambda x: x < 400"))"), h).params_ok);
  }
}

TEST_CASE("confusion pairs use display names", "[sandbox][validate]") {
  const auto gold = parse_call_text(R"(goto("Hangzhou", "West Lake", "Lingyin Temple", "10:00", "taxi"))");
  const auto pred = parse_call_text(R"(intercity_transport_select("Hangzhou", "Hangzhou", "taxi", "10:00"))");
  const auto r = validate_call(pred, gold);
  CHECK_FALSE(r.tool_ok);
  ConfusionCounter c;
  c.record(gold.tool_name, pred.tool_name);
  REQUIRE(c.top(1).size() == 1);
  CHECK(c.top(1)[0].gold == "Goto");
  CHECK(c.top(1)[0].pred == "IntercityTransport");
  CHECK(c.to_csv() == "gold_tool,pred_tool,count\nGoto,IntercityTransport,1\n");
}

TEST_CASE("call text parsing", "[sandbox][call_text]") {
  const auto c = parse_call_text(R"(Events("Baltimore", ["2024-11-18", "2024-11-20"]))");
  REQUIRE(c.arguments.size() == 2);
  CHECK(c.arguments[0].first == "city");
  CHECK(c.arguments[1].first == "dates");
  CHECK(c.arguments[1].second.size() == 2);
  const auto u = parse_call_text(R"(Mystery(1, 'two'))");
  CHECK(u.arguments[0].first == "arg0");
  CHECK(u.arguments[0].second == 1);
  CHECK_THROWS_AS(parse_call_text("FlightSearch(\"a\""), DataError);
  CHECK_THROWS_AS(parse_call_text("f(a=1, a=2)"), DataError);
}
