// SPDX-License-Identifier: Apache-2.0
// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include <unistd.h>

#include "support/dsl_oracle.hpp"
#include "support/fixtures.hpp"
#include "support/random_trip.hpp"
#include "tripdiag/context/builder.hpp"
#include "tripdiag/diagnostics.hpp"
#include "tripdiag/harness.hpp"
#include "tripdiag/sandbox/call_text.hpp"
#include "tripdiag/sandbox/registry.hpp"
#include "tripdiag/synth.hpp"

namespace fs = std::filesystem;
using namespace tripdiag;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt_seconds(double s) {
  std::ostringstream o;
  o.setf(std::ios::fixed);
  o.precision(2);
  o << s << " s";
  return o.str();
}

constexpr Profile kProfiles[] = {Profile::tp_like, Profile::tc_like, Profile::ct_like};

synth::GenSpec gen_spec(Profile p, std::uint64_t seed, int queries) {
  synth::GenSpec spec;
  spec.seed = seed;
  spec.profile = p;
  spec.cities = 3;
  spec.queries = queries;
  spec.innercity_legs_per_city = p == Profile::ct_like ? 4 : 0;
  return spec;
}

// Distinct-category subsets of violable constraints, sizes 1..3.
std::vector<std::vector<std::size_t>> injection_sets(const std::vector<dsl::Expr>& cs) {
  std::vector<std::size_t> pool;
  for (std::size_t i = 0; i < cs.size(); ++i) {
    const auto h = dsl::primary_head(cs[i]);
    if (h && *h != dsl::Head::days && *h != dsl::Head::people_number) pool.push_back(i);
  }
  std::vector<std::vector<std::size_t>> out;
  std::function<void(std::size_t, std::vector<std::size_t>&, std::set<FindingCategory>&)> rec =
      [&](std::size_t from, std::vector<std::size_t>& cur, std::set<FindingCategory>& cats) {
        if (!cur.empty()) out.push_back(cur);
        if (cur.size() == 3) return;
        for (std::size_t i = from; i < pool.size(); ++i) {
          const auto cat = dsl::category_of(cs[pool[i]]);
          if (cats.count(cat)) continue;
          cur.push_back(pool[i]);
          cats.insert(cat);
          rec(i + 1, cur, cats);
          cats.erase(cat);
          cur.pop_back();
        }
      };
  std::vector<std::size_t> cur;
  std::set<FindingCategory> cats;
  rec(0, cur, cats);
  return out;
}

// ---- 1 ----------------------------------------------------------------------

Outcome solver_self_consistency() {
  const auto t0 = Clock::now();
  std::size_t feasible = 0, violations = 0, bad_feasible = 0, bad_violation = 0, no_output = 0;
  std::string first_bad;

  auto check_case = [&](const Query& q, const std::vector<dsl::Expr>& cs, const PoiCatalog& catalog,
                        std::optional<solver::SlotPolicy> policy, const std::vector<std::size_t>& neg) {
    solver::SolveRequest req;
    req.query = q;
    req.constraints = cs;
    req.neg_subset = neg;
    req.policy = policy;
    req.search_budget = 50000;
    const auto out = solver::solve(req, catalog);
    if (!out.plan) {
      ++no_output;
      return;
    }
    const auto findings = solver::verify(*out.plan, cs, catalog, q);
    if (neg.empty()) {
      ++feasible;
      if (!findings.empty()) {
        ++bad_feasible;
        if (first_bad.empty()) first_bad = q.id + " feasible plan has findings";
      }
      return;
    }
    ++violations;
    std::set<FindingCategory> want;
    for (auto i : neg) want.insert(dsl::category_of(cs[i]));
    if (solver::categories(findings) != want) {
      ++bad_violation;
      if (first_bad.empty()) first_bad = q.id + " violation plan misses the injected categories";
    }
  };

  for (auto p : kProfiles)
    for (std::uint64_t seed = 1; seed <= 4; ++seed) {
      const auto g = synth::generate(gen_spec(p, 100 + seed, 8));
      for (const auto& gq : g.queries) {
        std::vector<dsl::Expr> cs;
        for (const auto& t : gq.annotated.constraints) cs.push_back(dsl::parse(t));
        check_case(gq.annotated.query, cs, g.catalog, std::nullopt, {});
        for (const auto& set : injection_sets(cs)) check_case(gq.annotated.query, cs, g.catalog, std::nullopt, set);
      }
    }
  for (std::uint64_t seed = 1; seed <= 150; ++seed) {
    const auto t = fixtures::random_trip(5000 + seed);
    check_case(t.query, t.constraints, t.catalog, t.policy, {});
    for (const auto& set : injection_sets(t.constraints)) check_case(t.query, t.constraints, t.catalog, t.policy, set);
  }

  const double secs = seconds_since(t0);
  const std::size_t total = feasible + violations;
  Outcome o;
  o.pass = total >= 500 && bad_feasible == 0 && bad_violation == 0 && secs < 60;
  o.detail = std::to_string(total) + " outputs (" + std::to_string(feasible) + " feasible, " +
             std::to_string(violations) + " violation), " + std::to_string(bad_feasible) + " unclean, " +
             std::to_string(bad_violation) + " off-target, " + std::to_string(no_output) + " without a plan, " +
             fmt_seconds(secs);
  if (!first_bad.empty()) o.detail += "; first: " + first_bad;
  return o;
}

// ---- 2 ----------------------------------------------------------------------

Outcome brute_force_equivalence() {
  const auto t0 = Clock::now();
  std::size_t fixtures_run = 0, disagreements = 0, feasible = 0, oversize = 0;
  std::string first;
  for (std::uint64_t seed = 1; seed <= 250; ++seed) {
    const auto t = fixtures::random_trip(seed);
    std::map<std::pair<PoiKind, std::string>, int> per;
    for (const auto& r : t.catalog.records()) {
      if (r.kind != PoiKind::accommodation && r.kind != PoiKind::restaurant && r.kind != PoiKind::attraction) continue;
      ++per[{r.kind, r.city}];
    }
    bool small = t.query.dates.size() <= 3;
    for (const auto& [k, n] : per) small = small && n <= 4;
    if (!small) {
      ++oversize;
      continue;
    }
    ++fixtures_run;
    solver::SolveRequest req;
    req.query = t.query;
    req.constraints = t.constraints;
    req.policy = t.policy;
    const auto out = solver::solve(req, t.catalog);
    const auto all = solver::enumerate_all(t.query, t.constraints, t.catalog, 1'000'000, t.policy);
    const bool solved = out.status == solver::SolveStatus::feasible;
    if (out.status == solver::SolveStatus::budget_exhausted || solved == all.plans.empty()) {
      ++disagreements;
      if (first.empty()) first = "seed " + std::to_string(seed);
    }
    feasible += solved;
  }
  Outcome o;
  o.pass = fixtures_run >= 200 && disagreements == 0 && oversize == 0;
  o.detail = std::to_string(fixtures_run) + " fixtures (" + std::to_string(feasible) + " feasible), " +
             std::to_string(disagreements) + " disagreements, " + fmt_seconds(seconds_since(t0));
  if (oversize) o.detail += ", " + std::to_string(oversize) + " fixtures over the size bound";
  if (!first.empty()) o.detail += "; first: " + first;
  return o;
}

// ---- 3 ----------------------------------------------------------------------

Outcome dsl_soundness() {
  const auto t0 = Clock::now();
  const auto t = fixtures::check_dsl_properties(10000, 20240301);
  Outcome o;
  o.pass = t.pairs == 10000 && t.disagreements() == 0;
  o.detail = std::to_string(t.pairs) + " pairs, " + std::to_string(t.held) + " holding; parse " +
             std::to_string(t.parse_failures) + ", oracle " + std::to_string(t.oracle_mismatches) + ", negation " +
             std::to_string(t.negation_failures) + ", idempotence " + std::to_string(t.idempotence_failures) +
             ", canonical meaning " + std::to_string(t.canon_drift) + ", " + fmt_seconds(seconds_since(t0));
  if (!t.examples.empty()) o.detail += "; first: " + t.examples.front();
  return o;
}

// ---- datasets shared by 4, 6 and 8 -------------------------------------------

struct Suite {
  Profile profile;
  PoiCatalog catalog;
  std::vector<harness::DatasetQuery> queries;
  harness::DatasetOptions options;
  harness::LoadedDataset data;
};

std::vector<Suite> make_suites() {
  std::vector<Suite> out;
  for (auto p : kProfiles) {
    Suite s;
    s.profile = p;
    auto g = synth::generate(gen_spec(p, 7, 6));
    s.catalog = g.catalog;
    for (auto& q : g.queries) s.queries.push_back({q.annotated, q.reference});
    s.options.seed = 77;
    const auto ds = harness::generate_dataset(s.catalog, s.queries, s.options);
    s.data = {s.catalog, ds.cases};
    out.push_back(std::move(s));
  }
  return out;
}

// ---- 4 ----------------------------------------------------------------------

Outcome context_levels(const std::vector<Suite>& suites) {
  const auto t0 = Clock::now();
  std::size_t cases = 0, buckets = 0, short_buckets = 0, count_errors = 0, chain_errors = 0, stray = 0;
  std::string first;
  auto fail = [&](std::size_t& counter, const std::string& what) {
    ++counter;
    if (first.empty()) first = what;
  };
  const std::set<PoiKind> kinds{PoiKind::attraction, PoiKind::accommodation, PoiKind::restaurant};

  for (const auto& s : suites) {
    std::map<std::string, std::map<ContextLevel, std::set<std::string>>> by_query;
    std::map<std::string, std::vector<std::string>> cs_text;
    for (const auto& c : s.data.cases) {
      if (c.subtask != Subtask::plan_generation) continue;
      ++cases;
      const auto plan = plan_from_json(c.gold.at("plan"));
      std::set<std::string> minimal, visited;
      for (const auto& d : plan.days)
        for (const auto& it : d.items)
          if (const auto* r = s.catalog.find(it.poi_id)) {
            minimal.insert(r->id);
            if (kinds.count(r->kind)) visited.insert(r->city);
          }
      std::set<std::string> ctx;
      for (const auto& rec : c.inputs.at("context").at("records")) ctx.insert(rec.at("id").get<std::string>());
      by_query[c.query_id][*c.level] = ctx;

      if (!std::includes(ctx.begin(), ctx.end(), minimal.begin(), minimal.end()))
        fail(chain_errors, c.case_id + " lacks a reference record");
      const int want = *c.level == ContextLevel::moderate ? 10 : *c.level == ContextLevel::rich ? 20 : 0;

      const auto q = query_from_json(c.inputs.at("query"));
      std::vector<dsl::Expr> cs;
      for (const auto& t : c.inputs.at("constraints")) cs.push_back(dsl::parse(t.get<std::string>()));
      const auto pool = context::distractor_pool(q, cs, s.catalog, solver::default_policy(q.profile), s.options.enumeration_cap);
      const std::set<std::string> pool_ids(pool.ids.begin(), pool.ids.end());

      std::map<std::pair<PoiKind, std::string>, int> got;
      for (const auto& id : ctx) {
        if (minimal.count(id)) continue;
        const auto* r = s.catalog.find(id);
        if (!r || !kinds.count(r->kind) || !visited.count(r->city) || !pool_ids.count(id)) {
          fail(stray, c.case_id + " has stray distractor " + id);
          continue;
        }
        ++got[{r->kind, r->city}];
      }
      std::map<std::pair<PoiKind, std::string>, int> reported;
      for (const auto& sf : c.gold.at("context_shortfalls"))
        reported[{kPoiKindNames.parse(sf.at("kind").get<std::string>(), "kind"), sf.at("city").get<std::string>()}] =
            sf.at("achieved").get<int>();
      for (const auto& city : visited)
        for (auto k : kinds) {
          ++buckets;
          int available = 0;
          for (const auto* r : s.catalog.in_city(k, city))
            if (!minimal.count(r->id) && pool_ids.count(r->id)) ++available;
          const int n = got[{k, city}];
          const auto key = std::pair{k, city};
          if (available >= want) {
            if (n != want || reported.count(key))
              fail(count_errors, c.case_id + " " + std::string(to_string(k)) + "@" + city + " has " + std::to_string(n));
          } else {
            ++short_buckets;
            if (n != available || !reported.count(key) || reported[key] != n)
              fail(count_errors, c.case_id + " short bucket " + std::string(to_string(k)) + "@" + city + " unreported");
          }
        }
    }
    for (auto& [qid, levels] : by_query) {
      auto& mn = levels[ContextLevel::minimal];
      auto& md = levels[ContextLevel::moderate];
      auto& rc = levels[ContextLevel::rich];
      if (levels.size() != 3 || !std::includes(md.begin(), md.end(), mn.begin(), mn.end()) ||
          !std::includes(rc.begin(), rc.end(), md.begin(), md.end()))
        fail(chain_errors, qid + " breaks minimal <= moderate <= rich");
    }
  }
  Outcome o;
  o.pass = cases > 0 && count_errors == 0 && chain_errors == 0 && stray == 0;
  o.detail = std::to_string(cases) + " cases, " + std::to_string(buckets) + " buckets (" +
             std::to_string(short_buckets) + " with a short pool), " + std::to_string(count_errors) +
             " count errors, " + std::to_string(stray) + " stray, " + std::to_string(chain_errors) +
             " chain breaks, " + fmt_seconds(seconds_since(t0));
  if (!first.empty()) o.detail += "; first: " + first;
  return o;
}

// ---- 5 ----------------------------------------------------------------------

Outcome metric_arithmetic(const std::vector<Suite>& suites) {
  using fixtures::attraction;
  using fixtures::flight;
  using fixtures::hotel;
  using fixtures::restaurant;
  std::vector<std::string> notes;
  bool ok = true;

  const auto ex = diagnostics::score_extraction(
      "x", {"days(plan) == 3", "people_number(plan) == 2", "'chinese' in cuisines(plan)"},
      {"days(plan) == 3", "people_number(plan) == 2", "total_budget(plan) <= 1000"});
  const Ratio two_thirds(2, 3);
  const bool prf = ex.metric("precision") == two_thirds && ex.metric("recall") == two_thirds &&
                   ex.metric("f1") == two_thirds;
  ok = ok && prf;
  notes.push_back(std::string("P=R=F1=2/3 ") + (prf ? "exact" : "off"));

  const PoiCatalog cat({
      flight("F1", "Home", "Ashford", "2024-03-01 08:00", 10000),
      flight("F2", "Home", "Ashford", "2024-03-01 11:00", 40000),
      flight("B1", "Ashford", "Home", "2024-03-02 18:00", 10000),
      hotel("H-priv", "Ashford", 9000, "private room"),
      hotel("H-home", "Ashford", 15000, "entire home"),
      restaurant("R-cn", "Ashford", 1000, {"chinese"}),
      restaurant("R-it", "Ashford", 1000, {"italian"}),
      attraction("A1", "Ashford", 0),
      attraction("A2", "Ashford", 0),
  });
  const auto q = fixtures::query("Home", {"Ashford"}, "2024-03-01", 2);
  const std::vector<dsl::Expr> cs{dsl::parse("total_budget(plan) <= 40000"),
                                  dsl::parse("'private room' in room_types(plan)"),
                                  dsl::parse("'chinese' in cuisines(plan)")};
  auto plan_with = [&](std::vector<std::size_t> neg) -> std::optional<Itinerary> {
    solver::SolveRequest req;
    req.query = q;
    req.constraints = cs;
    req.neg_subset = std::move(neg);
    req.policy = solver::SlotPolicy{1, 1, true};
    return solver::solve(req, cat).plan;
  };
  const auto faulty = plan_with({0, 1, 2});
  const auto half_fixed = plan_with({0});
  bool persistence = false;
  if (faulty && half_fixed) {
    const auto original = solver::verify(*faulty, cs, cat, q);
    const auto r = diagnostics::score_correction("k", to_json(*half_fixed), original, cs, cat, q);
    persistence = original.size() == 3 && r.metric("persistence") == Ratio(1, 3);
  }
  ok = ok && persistence;
  notes.push_back(std::string("persistence=1/3 ") + (persistence ? "exact" : "off"));

  // Randomly damaged tool calls drawn from the generated tool-use golds.
  Rng rng(5);
  std::size_t batches = 0, cases = 0, order_breaks = 0;
  for (const auto& s : suites) {
    const auto tools = sandbox::register_profile(s.profile);
    std::vector<std::vector<ToolCall>> golds;
    for (const auto& c : s.data.cases)
      if (c.subtask == Subtask::tool_use) {
        std::vector<ToolCall> g;
        for (const auto& j : c.gold.at("calls")) g.push_back(tool_call_from_json(j));
        golds.push_back(std::move(g));
      }
    for (int b = 0; b < 200; ++b) {
      sandbox::ConfusionCounter conf;
      std::vector<diagnostics::CaseResult> batch;
      const int size = rng.between(1, 8);
      for (int i = 0; i < size; ++i) {
        const auto& gold = golds[rng.index(golds.size())];
        auto pred = gold;
        for (auto& call : pred) {
          if (rng.chance(20)) call.tool_name = tools[rng.index(tools.size())].name;
          if (!call.arguments.empty() && rng.chance(25))
            call.arguments[rng.index(call.arguments.size())].second = "zzz";
        }
        if (!pred.empty() && rng.chance(15)) pred.pop_back();
        if (rng.chance(10)) pred.clear();
        batch.push_back(diagnostics::score_tool_use("b" + std::to_string(i), pred, gold, &conf));
        const auto& r = batch.back();
        ++cases;
        if (!(r.metric("overall_accuracy") <= std::min(r.metric("tool_accuracy"), r.metric("param_accuracy"))))
          ++order_breaks;
      }
      const auto agg = diagnostics::aggregate(batch, conf);
      const auto* a = agg.find(Subtask::tool_use);
      ++batches;
      if (!a || !(a->exact("overall_accuracy") <= std::min(a->exact("tool_accuracy"), a->exact("param_accuracy"))))
        ++order_breaks;
    }
  }
  ok = ok && order_breaks == 0 && batches > 0;
  notes.push_back("overall <= min(tool, param) on " + std::to_string(batches) + " batches / " +
                  std::to_string(cases) + " cases, " + std::to_string(order_breaks) + " breaks");

  Outcome o;
  o.pass = ok;
  for (const auto& n : notes) o.detail += (o.detail.empty() ? "" : "; ") + n;
  return o;
}

// ---- 6 ----------------------------------------------------------------------

Outcome oracle_closure(const std::vector<Suite>& suites, double setup_seconds) {
  const auto t0 = Clock::now();
  std::size_t cases = 0, imperfect = 0, subtasks_seen = 0;
  std::string first;
  bool null_ok = true;
  for (const auto& s : suites) {
    const auto& cs = s.data.cases;
    const auto rep = harness::run(s.data, [&cs] { return std::unique_ptr<harness::Agent>(new harness::OracleAgent(cs)); });
    cases += rep.results.size();
    subtasks_seen += rep.aggregate.subtasks.size() == 5;
    for (const auto& a : rep.aggregate.subtasks) {
      if (a.failures) {
        ++imperfect;
        if (first.empty()) first = std::string(to_string(s.profile)) + " " + std::string(to_string(a.subtask)) + " failures";
      }
      for (const auto& st : a.stats) {
        const double perfect = st.name == "persistence" ? 0.0 : 1.0;
        if (st.value != perfect) {
          ++imperfect;
          if (first.empty())
            first = std::string(to_string(s.profile)) + " " + std::string(to_string(a.subtask)) + " " + st.name;
        }
      }
    }
    const auto nul = harness::run(s.data, [] { return std::unique_ptr<harness::Agent>(new harness::NullAgent()); });
    const auto* ex = nul.aggregate.find(Subtask::extraction);
    const auto* id = nul.aggregate.find(Subtask::identification);
    const auto* pg = nul.aggregate.find(Subtask::plan_generation);
    null_ok = null_ok && ex && id && pg && ex->value("micro_recall") == 0.0 && id->value("micro_recall") == 0.0 &&
              pg->value("pass_rate") == 0.0;
  }
  const double secs = setup_seconds + seconds_since(t0);
  Outcome o;
  o.pass = cases > 0 && imperfect == 0 && subtasks_seen == suites.size() && null_ok && secs < 120;
  o.detail = std::to_string(cases) + " cases over " + std::to_string(suites.size()) + " profiles, " +
             std::to_string(imperfect) + " imperfect statistics (persistence perfect at 0), null agent " +
             (null_ok ? "recall 0 / pass 0" : "scored above 0") + ", " + fmt_seconds(secs) +
             " including generation";
  if (!first.empty()) o.detail += "; first: " + first;
  return o;
}

// ---- 7 ----------------------------------------------------------------------

std::uint64_t fnv1a(const std::string& bytes, std::uint64_t h = 1469598103934665603ULL) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

// Relative path -> contents for every regular file under `dir`.
std::map<std::string, std::string> snapshot(const fs::path& dir) {
  std::map<std::string, std::string> out;
  if (!fs::exists(dir)) return out;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (!e.is_regular_file()) continue;
    std::ifstream in(e.path(), std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    out[fs::relative(e.path(), dir).generic_string()] = s.str();
  }
  return out;
}

std::uint64_t tree_hash(const std::map<std::string, std::string>& files) {
  std::uint64_t h = 1469598103934665603ULL;
  for (const auto& [name, bytes] : files) h = fnv1a(bytes, fnv1a(name + '\0', h));
  return h;
}

std::string hex(std::uint64_t v) {
  std::ostringstream o;
  o << std::hex << v;
  return o.str();
}

std::string quoted(const fs::path& p) { return "'" + p.string() + "'"; }

Outcome determinism() {
  const auto t0 = Clock::now();
  const auto root = fs::temp_directory_path() / ("tripdiag_acceptance_" + std::to_string(::getpid()));
  fs::remove_all(root);
  fs::create_directories(root);
  std::string how;
#ifdef TRIPDIAG_CLI
  how = "tripdiag gen-data";
  auto sh = [&](const std::string& args) {
    const std::string cmd = std::string("'") + TRIPDIAG_CLI + "' " + args + " > /dev/null 2>&1";
    return std::system(cmd.c_str()) == 0;
  };
  bool ran = sh("demo-catalog --seed 3 --profile TC-like --queries 4 --out " + quoted(root / "src"));
  for (const char* out : {"a", "b"})
    ran = ran && sh("gen-data --catalog " + quoted(root / "src" / "catalog") + " --queries " +
                    quoted(root / "src" / "queries.jsonl") + " --seed 42 --out " + quoted(root / out));
  ran = ran && sh("gen-data --catalog " + quoted(root / "src" / "catalog") + " --queries " +
                  quoted(root / "src" / "queries.jsonl") + " --seed 43 --out " + quoted(root / "c"));
#else
  how = "library generate_dataset";
  bool ran = true;
  {
    auto g = synth::generate(gen_spec(Profile::tc_like, 3, 4));
    std::vector<harness::DatasetQuery> qs;
    for (auto& q : g.queries) qs.push_back({q.annotated, q.reference});
    for (auto [out, seed] : {std::pair{"a", 42}, std::pair{"b", 42}, std::pair{"c", 43}}) {
      harness::DatasetOptions opt;
      opt.seed = static_cast<std::uint64_t>(seed);
      harness::write_dataset(root / out, g.catalog, harness::generate_dataset(g.catalog, qs, opt), json{{"seed", seed}});
    }
  }
#endif
  const auto a = snapshot(root / "a"), b = snapshot(root / "b"), c = snapshot(root / "c");
  fs::remove_all(root);
  Outcome o;
  const auto ha = tree_hash(a), hb = tree_hash(b), hc = tree_hash(c);
  o.pass = ran && !a.empty() && a == b && ha == hb && ha != hc;
  o.detail = how + " x2: " + std::to_string(a.size()) + " files, hash " + hex(ha) + (ha == hb ? " == " : " != ") +
             hex(hb) + "; other seed " + (ha != hc ? "differs" : "does not differ") + ", " +
             fmt_seconds(seconds_since(t0));
  if (!ran) o.detail += "; a command failed";
  return o;
}

// ---- 8 ----------------------------------------------------------------------

Outcome error_count_structure(const std::vector<Suite>& suites) {
  std::size_t mismatches = 0, suites_complete = 0;
  std::map<std::size_t, std::size_t> sizes;
  std::string first;
  for (const auto& s : suites) {
    std::set<std::size_t> seen;
    for (const auto& c : s.data.cases) {
      if (c.subtask != Subtask::identification) continue;
      const auto findings = c.gold.at("findings");
      std::set<std::string> cats;
      for (const auto& f : findings) cats.insert(f.at("category").get<std::string>());
      const auto label = c.case_id.substr(c.case_id.rfind("/E") + 2, 1);
      const std::size_t k = findings.size();
      if (c.error_count != k || cats.size() != k || label != std::to_string(k) ||
          c.gold.at("neg_subset").size() != k) {
        ++mismatches;
        if (first.empty()) first = c.case_id;
      }
      seen.insert(k);
      ++sizes[k];
    }
    suites_complete += seen.count(1) && seen.count(2) && seen.count(3);
  }
  Outcome o;
  o.pass = mismatches == 0 && suites_complete == suites.size();
  o.detail = "E1/E2/E3 cases " + std::to_string(sizes[1]) + "/" + std::to_string(sizes[2]) + "/" +
             std::to_string(sizes[3]) + " with gold sizes matching, " + std::to_string(suites_complete) + "/" +
             std::to_string(suites.size()) + " profiles carry all three, " + std::to_string(mismatches) + " mismatches";
  if (!first.empty()) o.detail += "; first: " + first;
  return o;
}

}  // namespace

int main() {
  int failed = 0;
  auto report = [&](int n, const char* name, const std::function<Outcome()>& fn) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << " [" << n << "] " << name << ": " << o.detail << std::endl;
  };

  report(1, "solver self-consistency", solver_self_consistency);
  report(2, "brute-force equivalence", brute_force_equivalence);
  report(3, "DSL soundness", dsl_soundness);

  const auto t0 = Clock::now();
  std::vector<Suite> suites;
  std::string setup_error;
  try {
    suites = make_suites();
  } catch (const std::exception& e) {
    setup_error = e.what();
  }
  const double setup = seconds_since(t0);
  auto with_suites = [&](const std::function<Outcome()>& fn) {
    return [&, fn] { return setup_error.empty() ? fn() : Outcome{false, "dataset generation failed: " + setup_error}; };
  };

  report(4, "context levels", with_suites([&] { return context_levels(suites); }));
  report(5, "metric arithmetic", with_suites([&] { return metric_arithmetic(suites); }));
  report(6, "oracle closure", with_suites([&] { return oracle_closure(suites, setup); }));
  report(7, "determinism", determinism);
  report(8, "error-count structure", with_suites([&] { return error_count_structure(suites); }));

  std::cout << (failed ? "FAIL" : "PASS") << " acceptance: " << (8 - failed) << "/8 criteria" << std::endl;
  return failed ? 1 : 0;
}
