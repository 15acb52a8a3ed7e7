// SPDX-License-Identifier: Apache-2.0
#pragma once

// Task cases for the five sub-tasks and their construction from annotated
// queries. Every agent-visible input is an oracle artifact (gold
// constraints, solver plans, verifier findings, built contexts) or dataset
// material, and carries a provenance tag saying which.

#include <algorithm>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "tripdiag/context/builder.hpp"
#include "tripdiag/core/catalog.hpp"
#include "tripdiag/core/rng.hpp"
#include "tripdiag/core/serialize.hpp"
#include "tripdiag/dsl.hpp"
#include "tripdiag/sandbox/registry.hpp"
#include "tripdiag/solver.hpp"

namespace tripdiag::harness {

struct TaskCase {
  std::string case_id;
  std::string query_id;
  Subtask subtask = Subtask::extraction;
  Profile profile = Profile::tp_like;
  std::optional<ContextLevel> level;
  std::size_t error_count = 0;
  json inputs = json::object();      // sent to the agent
  json provenance = json::object();  // input field -> source tag
  json gold = json::object();        // never sent
};

inline json to_json(const TaskCase& c) {
  json j{{"format", kFormatVersion},         {"case_id", c.case_id}, {"query_id", c.query_id},
         {"subtask", to_string(c.subtask)}, {"profile", to_string(c.profile)}, {"inputs", c.inputs},
         {"provenance", c.provenance},      {"gold", c.gold}};
  if (c.level) j["level"] = to_string(*c.level);
  if (c.error_count) j["error_count"] = c.error_count;
  return j;
}

inline TaskCase task_case_from_json(const json& j) {
  tripdiag::detail::check_format(j, "task case");
  TaskCase c;
  c.case_id = tripdiag::detail::require(j, "case_id", "task case").get<std::string>();
  c.query_id = j.value("query_id", "");
  c.subtask = kSubtaskNames.parse(tripdiag::detail::require(j, "subtask", "task case").get<std::string>(), "subtask");
  c.profile = kProfileNames.parse(j.value("profile", "TP-like"), "profile");
  if (auto it = j.find("level"); it != j.end()) c.level = kContextLevelNames.parse(it->get<std::string>(), "level");
  c.error_count = j.value("error_count", std::size_t{0});
  c.inputs = j.value("inputs", json::object());
  c.provenance = j.value("provenance", json::object());
  c.gold = j.value("gold", json::object());
  return c;
}

/// Which violation sets to inject per query.
struct ErrorPlan {
  std::vector<int> counts{1, 2, 3};                                          // one case per count
  std::map<std::string, std::vector<std::vector<std::size_t>>> explicit_sets;  // query id -> index sets

  /// "1,2,3" style counts, or a JSON list of {query_id, neg_subset}.
  static ErrorPlan parse(const std::string& text) {
    ErrorPlan p;
    if (!text.empty() && (text.front() == '[' || text.front() == '{')) {
      const auto j = json::parse(text, nullptr, false);
      if (j.is_discarded() || !j.is_array()) throw DataError("error plan: expected a JSON list");
      p.counts.clear();
      for (const auto& e : j) {
        if (!e.is_object() || !e.contains("query_id") || !e.contains("neg_subset"))
          throw DataError("error plan entries need query_id and neg_subset");
        p.explicit_sets[e["query_id"].get<std::string>()].push_back(e["neg_subset"].get<std::vector<std::size_t>>());
      }
      return p;
    }
    p.counts.clear();
    std::string cur;
    for (char c : text + ",") {
      if (c == ',') {
        if (cur.empty()) continue;
        const int n = std::stoi(cur);
        if (n < 1 || n > 8) throw UsageError("error counts must be between 1 and 8");
        p.counts.push_back(n);
        cur.clear();
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        cur += c;
      } else if (c != ' ') {
        throw UsageError("error plan: expected counts like 1,2,3");
      }
    }
    return p;
  }
};

struct DatasetOptions {
  std::uint64_t seed = 1;
  ErrorPlan errors;
  std::uint64_t search_budget = 200000;
  std::uint64_t enumeration_cap = 20000;
  int subset_attempts = 8;
};

struct Skipped {
  std::string query_id;
  std::string what;
  std::string reason;
};

struct Dataset {
  std::vector<TaskCase> cases;
  std::vector<Skipped> skipped;
};

/// A single-step tool request with its gold call.
struct ToolRequest {
  std::string text;
  ToolCall call;
};

namespace detail {

inline const char* const kMonths[] = {"January", "February", "March",     "April",   "May",      "June",
                                      "July",    "August",   "September", "October", "November", "December"};

inline std::string long_date(Date d) {
  const std::string s = d.str();
  const int m = std::stoi(s.substr(5, 2));
  return std::string(kMonths[m - 1]) + " " + std::to_string(std::stoi(s.substr(8, 2))) + ", " + s.substr(0, 4);
}

inline ToolCall make_call(std::string name, std::vector<std::pair<std::string, json>> args) {
  return ToolCall{std::move(name), std::move(args)};
}

inline std::vector<const PoiRecord*> plan_records(const Itinerary& plan, const PoiCatalog& catalog, PoiKind kind) {
  std::vector<const PoiRecord*> out;
  for (const auto& d : plan.days)
    for (const auto& it : d.items)
      if (const auto* r = catalog.find(it.poi_id); r && r->kind == kind) out.push_back(r);
  return out;
}

inline std::string tenths_text(std::int64_t tenths) { return std::to_string(tenths / 10) + "." + std::to_string(tenths % 10); }

}  // namespace detail

/// Five single-step requests per query, shaped like the profile's tool-call
/// prompt examples and grounded in the reference plan.
inline std::vector<ToolRequest> tool_requests(const Query& q, const Itinerary& ref, const PoiCatalog& catalog, Rng& rng) {
  using detail::make_call;
  const auto& first = q.destinations.front();
  const auto& last = q.destinations.back();
  const auto o = q.origin;
  std::vector<ToolRequest> out;
  switch (q.profile) {
    case Profile::tp_like:
      out = {{"Find flights from " + o + " to " + first + " on " + detail::long_date(q.dates.front()) + ".",
              make_call("FlightSearch", {{"origin", o}, {"destination", first}, {"date", q.dates.front().str()}})},
             {"Search for hotels in " + first + ".", make_call("AccommodationSearch", {{"city", first}})},
             {"What attractions can I visit in " + last + "?", make_call("AttractionSearch", {{"city", last}})},
             {"Find restaurants in " + first + ".", make_call("RestaurantSearch", {{"city", first}})},
             {"How long does it take to drive from " + last + " to " + o + "?",
              make_call("DistanceMatrix", {{"origin", last}, {"destination", o}, {"mode", "self-driving"}})}};
      break;
    case Profile::tc_like: {
      std::vector<ToolRequest> all{
          {"Find flights from " + o + " to " + first + " on " + detail::long_date(q.dates.front()) + ".",
           make_call("Flights", {{"origin", o}, {"destination", first}, {"date", q.dates.front().str()}})},
          {"Search for hotels in " + first + ".", make_call("Accommodations", {{"city", first}})},
          {"What attractions can I visit in " + first + "?", make_call("Attractions", {{"city", first}})},
          {"Find restaurants in " + last + ".", make_call("Restaurants", {{"city", last}})},
          {"Find events in " + first + " from " + detail::long_date(q.dates.front()) + " to " +
               detail::long_date(q.dates.back()) + ".",
           make_call("Events", {{"city", first}, {"dates", json::array({q.dates.front().str(), q.dates.back().str()})}})},
          {"How long does it take to drive from " + o + " to " + first + "?",
           make_call("GoogleDistanceMatrix", {{"origin", o}, {"destination", first}, {"mode", "driving"}})}};
      all.erase(all.begin() + static_cast<std::ptrdiff_t>(1 + rng.index(all.size() - 1)));
      out = std::move(all);
      break;
    }
    case Profile::ct_like: {
      const auto sights = detail::plan_records(ref, catalog, PoiKind::attraction);
      const auto hotels = detail::plan_records(ref, catalog, PoiKind::accommodation);
      std::vector<const PoiRecord*> legs = detail::plan_records(ref, catalog, PoiKind::intercity_transit);
      const auto flights = detail::plan_records(ref, catalog, PoiKind::flight);
      legs.insert(legs.end(), flights.begin(), flights.end());
      std::int64_t min_rating = 50;
      for (const auto* s : sights)
        if (s->rating) min_rating = std::min(min_rating, s->rating->tenths);
      out.push_back({"I want to visit attractions in " + first + " with rating at least " +
                         detail::tenths_text(min_rating) + ".",
                     make_call("attractions_select", {{"city", first},
                                                      {"key", "rating"},
                                                      {"func", "lambda x: x >= " + detail::tenths_text(min_rating)}})});
      const Money cap = hotels.empty() ? 40000 : (hotels.front()->price + 4999) / 5000 * 5000;
      out.push_back({"Find me hotels in " + first + " with price no more than " + std::to_string(cap / 100) +
                         " per night.",
                     make_call("accommodations_select",
                               {{"city", first}, {"key", "price"}, {"func", "lambda x: x <= " + std::to_string(cap / 100)}})});
      std::vector<const PoiRecord*> local;
      for (const auto* s : sights)
        if (s->city == first) local.push_back(s);
      for (const auto* r : catalog.in_city(PoiKind::attraction, first))
        if (local.size() < 2 && std::find(local.begin(), local.end(), r) == local.end()) local.push_back(r);
      if (!local.empty())
        out.push_back({"Recommend 5 restaurants within 2km of " + local[0]->name + " in " + first + ".",
                       make_call("restaurants_nearby", {{"city", first}, {"point", local[0]->name}, {"topk", 5}, {"dist", 2}})});
      if (!legs.empty()) {
        const auto* leg = legs.front();
        const int hour = leg->depart ? leg->depart->minute / 60 : 8;
        const std::string after = clock_str(hour * 60);
        const auto mode = dsl::effective_mode(*leg);
        out.push_back({"I need a " + mode + " from " + leg->origin + " to " + leg->destination + " departing after " +
                           after + ".",
                       make_call("intercity_transport_select", {{"start_city", leg->origin},
                                                                {"end_city", leg->destination},
                                                                {"intercity_type", mode},
                                                                {"earliest_leave_time", after}})});
      }
      if (local.size() >= 2)
        out.push_back({"How do I take a taxi from " + local[0]->name + " to " + local[1]->name + " at 10:00 in " + first +
                           "?",
                       make_call("goto", {{"city", first},
                                          {"start", local[0]->name},
                                          {"end", local[1]->name},
                                          {"start_time", "10:00"},
                                          {"transport_type", "taxi"}})});
      break;
    }
  }
  return out;
}

namespace detail {

inline json query_brief(const Query& q) { return json{{"id", q.id}, {"text", q.text}, {"profile", to_string(q.profile)}}; }

inline json string_list(const std::vector<dsl::Expr>& cs) {
  json a = json::array();
  for (const auto& c : cs) a.push_back(dsl::render(c));
  return a;
}

inline bool violable(const dsl::Expr& c) {
  const auto h = dsl::primary_head(c);
  return h && *h != dsl::Head::days && *h != dsl::Head::people_number;
}

// k-subsets of `pool` whose constraints fall in distinct categories.
inline void distinct_subsets(const std::vector<std::size_t>& pool, const std::vector<dsl::Expr>& cs, std::size_t k,
                             std::size_t from, std::vector<std::size_t>& cur, std::vector<std::vector<std::size_t>>& out) {
  if (cur.size() == k) {
    out.push_back(cur);
    return;
  }
  for (std::size_t i = from; i < pool.size(); ++i) {
    const auto cat = dsl::category_of(cs[pool[i]]);
    if (std::any_of(cur.begin(), cur.end(), [&](std::size_t j) { return dsl::category_of(cs[j]) == cat; })) continue;
    cur.push_back(pool[i]);
    distinct_subsets(pool, cs, k, i + 1, cur, out);
    cur.pop_back();
  }
}

}  // namespace detail

/// Input of one dataset query: annotated query plus an optional known
/// reference plan (the solver finds one otherwise).
struct DatasetQuery {
  AnnotatedQuery annotated;
  std::optional<Itinerary> reference;
};

/// Emits per query: one extraction case, one tool-use case, plan-generation
/// cases at the three context levels, and one identification and one
/// correction case per injected error set. Queries or error sets the solver
/// cannot serve are skipped with a reason.
inline Dataset generate_dataset(const PoiCatalog& catalog, const std::vector<DatasetQuery>& queries,
                                const DatasetOptions& opt) {
  Dataset ds;
  Rng rng(opt.seed);
  for (const auto& dq : queries) {
    const Query& q = dq.annotated.query;
    const auto qrng_seed = rng.between(std::int64_t{1}, std::int64_t{1} << 40);
    Rng qrng(static_cast<std::uint64_t>(qrng_seed));
    std::vector<dsl::Expr> cs;
    try {
      for (const auto& t : dq.annotated.constraints) cs.push_back(dsl::parse(t));
    } catch (const Error& e) {
      ds.skipped.push_back({q.id, "query", std::string("constraint does not parse: ") + e.what()});
      continue;
    }
    const auto policy = solver::default_policy(q.profile);

    std::optional<Itinerary> ref = dq.reference;
    if (ref && !solver::verify(*ref, cs, catalog, q).empty()) ref.reset();
    if (!ref) {
      solver::SolveRequest req;
      req.query = q;
      req.constraints = cs;
      req.search_budget = opt.search_budget;
      req.policy = policy;
      req.seed = static_cast<std::uint64_t>(qrng.between(std::int64_t{1}, std::int64_t{1} << 40));
      auto out = solver::solve(req, catalog);
      if (!out.plan) {
        ds.skipped.push_back({q.id, "query", "no reference plan: " + std::string(to_string(out.status))});
        continue;
      }
      ref = std::move(out.plan);
    }
    ref->query_id = q.id;
    const json qjson = to_json(q);
    const json ref_json = to_json(*ref);
    const json cs_json = detail::string_list(cs);
    auto base = [&](Subtask st, std::string suffix) {
      TaskCase c;
      c.case_id = q.id + "/" + std::string(to_string(st)) + suffix;
      c.query_id = q.id;
      c.subtask = st;
      c.profile = q.profile;
      return c;
    };

    {
      auto c = base(Subtask::extraction, "");
      c.inputs = json{{"query", detail::query_brief(q)}};
      c.provenance = json{{"query", "dataset:query"}};
      c.gold = json{{"constraints", dq.annotated.constraints}};
      ds.cases.push_back(std::move(c));
    }
    {
      auto c = base(Subtask::tool_use, "");
      const auto reqs = tool_requests(q, *ref, catalog, qrng);
      json texts = json::array(), calls = json::array();
      for (const auto& r : reqs) {
        texts.push_back(r.text);
        calls.push_back(to_json(r.call));
      }
      json tools = json::array();
      for (const auto& t : sandbox::register_profile(q.profile)) tools.push_back(sandbox::to_json(t));
      c.inputs = json{{"query", detail::query_brief(q)}, {"requests", texts}, {"tools", tools}};
      c.provenance = json{{"query", "dataset:query"}, {"requests", "oracle:reference_plan"}, {"tools", "dataset:registry"}};
      c.gold = json{{"calls", calls}};
      ds.cases.push_back(std::move(c));
    }

    const auto pool = context::distractor_pool(q, cs, catalog, policy, opt.enumeration_cap);
    for (auto level : {ContextLevel::minimal, ContextLevel::moderate, ContextLevel::rich}) {
      auto c = base(Subtask::plan_generation, "/" + std::string(to_string(level)));
      c.level = level;
      const auto built = context::build(c.case_id, *ref, nullptr, catalog, {level, opt.seed}, &pool);
      json shortfalls = json::array();
      for (const auto& s : built.shortfalls) shortfalls.push_back(context::to_json(s));
      c.inputs = json{{"query", qjson}, {"constraints", cs_json}, {"context", context::hydrate(built.context, catalog)}};
      c.provenance = json{{"query", "dataset:query"}, {"constraints", "oracle:gold_constraints"}, {"context", "oracle:context_builder"}};
      c.gold = json{{"plan", ref_json}, {"context_shortfalls", shortfalls}};
      ds.cases.push_back(std::move(c));
    }

    std::vector<std::vector<std::size_t>> sets;
    if (auto it = opt.errors.explicit_sets.find(q.id); it != opt.errors.explicit_sets.end()) sets = it->second;
    std::vector<std::size_t> pool_idx;
    for (std::size_t i = 0; i < cs.size(); ++i)
      if (detail::violable(cs[i])) pool_idx.push_back(i);
    for (int k : opt.errors.counts) {
      std::vector<std::vector<std::size_t>> options;
      std::vector<std::size_t> cur;
      detail::distinct_subsets(pool_idx, cs, static_cast<std::size_t>(k), 0, cur, options);
      qrng.shuffle(options);
      if (options.size() > static_cast<std::size_t>(opt.subset_attempts)) options.resize(static_cast<std::size_t>(opt.subset_attempts));
      if (options.empty()) {
        ds.skipped.push_back({q.id, "E" + std::to_string(k), "fewer than " + std::to_string(k) + " constraints in distinct categories"});
        continue;
      }
      options.push_back({});  // sentinel marking exhaustion
      for (const auto& o : options) {
        if (o.empty()) {
          ds.skipped.push_back({q.id, "E" + std::to_string(k), "no violation plan for any tried subset"});
          break;
        }
        if (std::find(sets.begin(), sets.end(), o) != sets.end()) break;
        solver::SolveRequest req;
        req.query = q;
        req.constraints = cs;
        req.neg_subset = o;
        req.search_budget = opt.search_budget;
        req.policy = policy;
        const auto out = solver::solve(req, catalog);
        if (out.plan) {
          sets.push_back(o);
          break;
        }
      }
    }

    for (const auto& set : sets) {
      solver::SolveRequest req;
      req.query = q;
      req.constraints = cs;
      req.neg_subset = set;
      req.search_budget = opt.search_budget;
      req.policy = policy;
      std::string label = "E" + std::to_string(set.size());
      auto out = solver::solve(req, catalog);
      if (!out.plan) {
        ds.skipped.push_back({q.id, label, "no violation plan: " + std::string(to_string(out.status))});
        continue;
      }
      out.plan->query_id = q.id;
      const auto findings = solver::verify(*out.plan, cs, catalog, q);
      std::set<FindingCategory> want;
      for (auto i : set) want.insert(dsl::category_of(cs[i]));
      if (solver::categories(findings) != want || findings.size() != set.size())
        throw Error("violation plan for " + q.id + " does not verify to the injected set");
      std::string suffix = "/" + label;
      for (auto i : set) suffix += "-" + std::to_string(i);
      const json faulty = to_json(*out.plan);
      const json gold_findings = to_json_array(findings);

      auto id_case = base(Subtask::identification, suffix);
      id_case.error_count = set.size();
      const auto minimal = context::build(id_case.case_id, *out.plan, nullptr, catalog, {ContextLevel::minimal, opt.seed});
      id_case.inputs = json{{"query", qjson},
                            {"constraints", cs_json},
                            {"plan", faulty},
                            {"context", context::hydrate(minimal.context, catalog)}};
      id_case.provenance = json{{"query", "dataset:query"},
                                {"constraints", "oracle:gold_constraints"},
                                {"plan", "oracle:violation_solver"},
                                {"context", "oracle:context_builder"}};
      id_case.gold = json{{"findings", gold_findings}, {"neg_subset", set}};
      ds.cases.push_back(std::move(id_case));

      auto fix = base(Subtask::correction, suffix);
      fix.error_count = set.size();
      fix.level = ContextLevel::correction;
      const auto ctx = context::build(fix.case_id, *ref, &*out.plan, catalog, {ContextLevel::correction, opt.seed});
      fix.inputs = json{{"query", qjson},
                        {"constraints", cs_json},
                        {"plan", faulty},
                        {"findings", gold_findings},
                        {"context", context::hydrate(ctx.context, catalog)}};
      fix.provenance = json{{"query", "dataset:query"},
                            {"constraints", "oracle:gold_constraints"},
                            {"plan", "oracle:violation_solver"},
                            {"findings", "oracle:verifier"},
                            {"context", "oracle:context_builder"}};
      fix.gold = json{{"plan", ref_json}};
      ds.cases.push_back(std::move(fix));
    }
  }
  return ds;
}

inline json to_json(const Skipped& s) { return json{{"query_id", s.query_id}, {"what", s.what}, {"reason", s.reason}}; }

inline json manifest_json(const Dataset& ds, const json& config) {
  std::map<std::string, std::size_t> counts;
  for (const auto& c : ds.cases) ++counts[std::string(to_string(c.subtask))];
  json skipped = json::array();
  for (const auto& s : ds.skipped) skipped.push_back(to_json(s));
  return json{{"format", kFormatVersion}, {"config", config}, {"cases", ds.cases.size()}, {"by_subtask", counts}, {"skipped", skipped}};
}

inline std::string cases_text(const std::vector<TaskCase>& cases) {
  std::string out;
  for (const auto& c : cases) out += to_json(c).dump() + "\n";
  return out;
}

/// DIR/cases.jsonl, DIR/catalog/, DIR/manifest.json.
inline void write_dataset(const std::filesystem::path& dir, const PoiCatalog& catalog, const Dataset& ds, const json& config) {
  std::filesystem::create_directories(dir);
  save_catalog(catalog, dir / "catalog");
  write_text_file(dir / "cases.jsonl", cases_text(ds.cases));
  write_text_file(dir / "manifest.json", manifest_json(ds, config).dump(2) + "\n");
}

struct LoadedDataset {
  PoiCatalog catalog;
  std::vector<TaskCase> cases;
};

inline LoadedDataset read_dataset(const std::filesystem::path& dir) {
  LoadedDataset out{load_catalog(dir / "catalog"), {}};
  std::set<std::string> ids;
  for (const auto& j : read_json_lines(dir / "cases.jsonl")) {
    auto c = task_case_from_json(j);
    if (!ids.insert(c.case_id).second) throw DataError("duplicate case id " + c.case_id);
    out.cases.push_back(std::move(c));
  }
  return out;
}

}  // namespace tripdiag::harness
