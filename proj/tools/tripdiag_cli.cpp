// SPDX-License-Identifier: Apache-2.0
// tripdiag command-line front end.
//
// Exit codes: 0 success, 1 usage, 2 data error, 3 endpoint failure.
// TRIPDIAG_LOG=quiet|info|debug sets stderr verbosity (default info).

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "tripdiag/context/builder.hpp"
#include "tripdiag/core/schema.hpp"
#include "tripdiag/harness.hpp"
#include "tripdiag/synth.hpp"

using namespace tripdiag;
namespace fs = std::filesystem;

namespace {

enum class Verbosity { quiet, info, debug };

Verbosity verbosity() {
  const char* v = std::getenv("TRIPDIAG_LOG");
  if (!v) return Verbosity::info;
  const std::string s = v;
  if (s == "quiet") return Verbosity::quiet;
  if (s == "debug") return Verbosity::debug;
  return Verbosity::info;
}

void log(Verbosity at, const std::string& msg) {
  if (verbosity() >= at) std::cerr << "tripdiag: " << msg << "\n";
}

std::string read_text(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw DataError("cannot open " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json read_json(const fs::path& p) { return read_json_file(p); }

// A plan document, or the output of `solve` holding one.
json read_plan(const fs::path& p) {
  json j = read_json(p);
  if (j.is_object() && j.contains("status") && !j.contains("days")) {
    if (!j.contains("plan") || !j["plan"].is_object()) throw DataError(p.string() + ": solve output holds no plan (" + j["status"].dump() + ")");
    return j["plan"];
  }
  return j;
}

/// A JSON list of DSL strings, an object with "constraints", or one
/// constraint per line ('#' starts a comment line).
std::vector<std::string> read_constraint_texts(const fs::path& p) {
  const auto text = read_text(p);
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && (text[first] == '[' || text[first] == '{')) {
    const auto j = json::parse(text, nullptr, false);
    if (j.is_discarded()) throw DataError(p.string() + ": not valid JSON");
    if (j.is_array()) return j.get<std::vector<std::string>>();
    return detail::require(j, "constraints", p.string().c_str()).get<std::vector<std::string>>();
  }
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos || line[b] == '#') continue;
    const auto e = line.find_last_not_of(" \t\r");
    out.push_back(line.substr(b, e - b + 1));
  }
  return out;
}

std::vector<dsl::Expr> parse_all(const std::vector<std::string>& texts) {
  std::vector<dsl::Expr> out;
  for (const auto& t : texts) out.push_back(dsl::parse(t));
  return out;
}

/// JSON lines or a JSON list of annotated queries; an optional "reference"
/// field carries a known-good plan.
std::vector<harness::DatasetQuery> read_queries(const fs::path& p) {
  const auto text = read_text(p);
  std::vector<json> docs;
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '[') {
    const auto j = json::parse(text, nullptr, false);
    if (j.is_discarded()) throw DataError(p.string() + ": not valid JSON");
    docs.assign(j.begin(), j.end());
  } else {
    docs = read_json_lines(p);
  }
  std::vector<harness::DatasetQuery> out;
  for (const auto& d : docs) {
    harness::DatasetQuery q{annotated_query_from_json(d), std::nullopt};
    if (auto it = d.find("reference"); it != d.end()) {
      auto s = validate_schema(*it, &q.annotated.query);
      if (!s.ok()) throw DataError("query " + q.annotated.query.id + ": reference plan fails the schema");
      q.reference = plan_from_json(*it, &q.annotated.query);
    }
    out.push_back(std::move(q));
  }
  return out;
}

std::vector<std::size_t> parse_indices(const std::string& s) {
  std::vector<std::size_t> out;
  std::stringstream ss(s);
  std::string part;
  while (std::getline(ss, part, ',')) {
    if (part.empty()) continue;
    if (part.find_first_not_of("0123456789") != std::string::npos) throw UsageError("bad index '" + part + "'");
    out.push_back(std::stoul(part));
  }
  return out;
}

void emit(const json& j, const std::string& out_path) {
  const auto text = j.dump(2) + "\n";
  if (out_path.empty() || out_path == "-") std::cout << text;
  else write_text_file(out_path, text);
}

void print_summary(const diagnostics::AggregateReport& agg) {
  for (const auto& a : agg.subtasks) {
    std::cout << to_string(a.subtask) << " (" << a.cases << " cases, " << a.failures << " failed)\n";
    for (const auto& s : a.stats) std::cout << "  " << s.name << " = " << s.value << "\n";
  }
}

void write_report(const json& config, const harness::RunReport& rep, const std::string& out, const std::string& csv_dir) {
  emit(diagnostics::report_json(config, rep.results, rep.aggregate), out);
  if (!csv_dir.empty()) {
    write_text_file(fs::path(csv_dir) / "per_case.csv", diagnostics::per_case_csv(rep.results));
    write_text_file(fs::path(csv_dir) / "aggregate.csv", diagnostics::aggregate_csv(rep.aggregate));
    write_text_file(fs::path(csv_dir) / "confusion.csv", rep.confusion.to_csv());
  }
}

std::optional<std::set<Subtask>> parse_subtasks(const std::vector<std::string>& names) {
  if (names.empty()) return std::nullopt;
  std::set<Subtask> out;
  for (const auto& n : names) {
    if (n == "all") return std::nullopt;
    out.insert(kSubtaskNames.parse(n, "subtask"));
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tripdiag: decoupled diagnostics for travel-planning agents"};
  app.require_subcommand(1);

  // gen-data
  auto* gen = app.add_subcommand("gen-data", "Build a task-case dataset from a catalog and annotated queries");
  std::string gen_catalog, gen_queries, gen_errors = "1,2,3", gen_out;
  std::uint64_t gen_seed = 1, gen_budget = 200000;
  gen->add_option("--catalog", gen_catalog, "Catalog directory")->required();
  gen->add_option("--queries", gen_queries, "Annotated queries (JSON lines or list)")->required();
  gen->add_option("--errors", gen_errors, "Error counts like 1,2,3 or a JSON file of {query_id, neg_subset}")
      ->capture_default_str();
  gen->add_option("--seed", gen_seed, "Dataset seed")->capture_default_str();
  gen->add_option("--budget", gen_budget, "Solver node budget per solve")->capture_default_str();
  gen->add_option("--out", gen_out, "Output directory")->required();

  // solve
  auto* solve = app.add_subcommand("solve", "Find a plan satisfying the constraints, or violating chosen ones");
  std::string sv_catalog, sv_query, sv_constraints, sv_violate, sv_trace, sv_out;
  std::uint64_t sv_seed = 0, sv_budget = 200000;
  solve->add_option("--catalog", sv_catalog, "Catalog directory")->required();
  solve->add_option("--query", sv_query, "Query JSON")->required();
  solve->add_option("--constraints", sv_constraints, "Constraint file (defaults to the query's own list)");
  solve->add_option("--violate", sv_violate, "Comma-separated constraint indices to violate");
  solve->add_option("--seed", sv_seed, "Candidate-order seed (0 keeps catalog order)");
  solve->add_option("--budget", sv_budget, "Node budget")->capture_default_str();
  solve->add_option("--trace", sv_trace, "Write search decisions as JSON lines");
  solve->add_option("--out", sv_out, "Output file (default stdout)");

  // verify
  auto* verify = app.add_subcommand("verify", "List every violation of a plan");
  std::string vf_catalog, vf_query, vf_plan, vf_constraints;
  verify->add_option("--catalog", vf_catalog, "Catalog directory")->required();
  verify->add_option("--query", vf_query, "Query JSON")->required();
  verify->add_option("--plan", vf_plan, "Plan JSON")->required();
  verify->add_option("--constraints", vf_constraints, "Constraint file (defaults to the query's own list)");

  // context
  auto* ctx = app.add_subcommand("context", "Build an information context for a plan");
  std::string cx_catalog, cx_plan, cx_level = "minimal", cx_faulty, cx_query, cx_constraints, cx_out;
  std::uint64_t cx_seed = 0;
  bool cx_hydrate = false;
  ctx->add_option("--catalog", cx_catalog, "Catalog directory")->required();
  ctx->add_option("--plan", cx_plan, "Reference plan JSON")->required();
  ctx->add_option("--level", cx_level, "minimal, moderate, rich or correction")->capture_default_str();
  ctx->add_option("--faulty", cx_faulty, "Faulty plan JSON (correction level)");
  ctx->add_option("--query", cx_query, "Query JSON; with constraints, restricts distractors to the feasible pool");
  ctx->add_option("--constraints", cx_constraints, "Constraint file");
  ctx->add_option("--seed", cx_seed, "Distractor seed");
  ctx->add_flag("--hydrate", cx_hydrate, "Emit full records instead of ids");
  ctx->add_option("--out", cx_out, "Output file (default stdout)");

  // run
  auto* runc = app.add_subcommand("run", "Evaluate an agent on a dataset");
  std::string rn_cases, rn_agent, rn_out, rn_csv;
  std::vector<std::string> rn_subtasks;
  std::size_t rn_parallel = 1;
  double rn_timeout = 60;
  int rn_retries = 0;
  runc->add_option("--cases", rn_cases, "Dataset directory")->required();
  runc->add_option("--agent", rn_agent, "Agent command line, or http:// URL")->required();
  runc->add_option("--subtask", rn_subtasks, "Subtask filter (repeatable; default all)");
  runc->add_option("--parallel", rn_parallel, "Concurrent requests")->capture_default_str()->check(CLI::PositiveNumber);
  runc->add_option("--timeout", rn_timeout, "Seconds per request")->capture_default_str()->check(CLI::PositiveNumber);
  runc->add_option("--retries", rn_retries, "Retries after a timeout")->capture_default_str()->check(CLI::NonNegativeNumber);
  runc->add_option("--out", rn_out, "Report JSON file")->required();
  runc->add_option("--csv-dir", rn_csv, "Also write per_case.csv, aggregate.csv and confusion.csv here");

  // score
  auto* score = app.add_subcommand("score", "Score recorded agent responses");
  std::string sc_cases, sc_responses, sc_out, sc_csv;
  std::vector<std::string> sc_subtasks;
  score->add_option("--cases", sc_cases, "Dataset directory")->required();
  score->add_option("--responses", sc_responses, "Response envelopes, one JSON per line")->required();
  score->add_option("--subtask", sc_subtasks, "Subtask filter (repeatable; default all)");
  score->add_option("--out", sc_out, "Report JSON file (default stdout)");
  score->add_option("--csv-dir", sc_csv, "Also write CSV tables here");

  // demo-catalog
  auto* demo = app.add_subcommand("demo-catalog", "Write a synthetic catalog and annotated queries");
  std::string dm_out, dm_profile = "TP-like", dm_spec;
  std::uint64_t dm_seed = 1;
  int dm_queries = 8;
  demo->add_option("--seed", dm_seed, "Generator seed")->capture_default_str();
  demo->add_option("--profile", dm_profile, "TP-like, TC-like or CT-like")->capture_default_str();
  demo->add_option("--queries", dm_queries, "Number of queries")->capture_default_str()->check(CLI::PositiveNumber);
  demo->add_option("--spec", dm_spec, "Generator settings JSON (overrides the flags above)");
  demo->add_option("--out", dm_out, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (*gen) {
      const auto catalog = load_catalog(gen_catalog);
      const auto queries = read_queries(gen_queries);
      harness::DatasetOptions opt;
      opt.seed = gen_seed;
      opt.search_budget = gen_budget;
      opt.errors = harness::ErrorPlan::parse(fs::is_regular_file(gen_errors) ? read_text(gen_errors) : gen_errors);
      const auto ds = harness::generate_dataset(catalog, queries, opt);
      for (const auto& s : ds.skipped) log(Verbosity::info, "skipped " + s.query_id + " " + s.what + ": " + s.reason);
      const json config{{"seed", gen_seed}, {"errors", gen_errors}, {"search_budget", gen_budget}, {"queries", queries.size()}};
      harness::write_dataset(gen_out, catalog, ds, config);
      log(Verbosity::info, "wrote " + std::to_string(ds.cases.size()) + " cases to " + gen_out);
      return 0;
    }

    if (*solve) {
      const auto catalog = load_catalog(sv_catalog);
      const auto aq = annotated_query_from_json(read_json(sv_query));
      solver::SolveRequest req;
      req.query = aq.query;
      req.constraints = parse_all(sv_constraints.empty() ? aq.constraints : read_constraint_texts(sv_constraints));
      req.neg_subset = parse_indices(sv_violate);
      req.seed = sv_seed;
      req.search_budget = sv_budget;
      std::ofstream trace;
      if (!sv_trace.empty()) {
        trace.open(sv_trace);
        if (!trace) throw DataError("cannot write " + sv_trace);
      }
      const auto out = solver::solve(req, catalog, sv_trace.empty() ? nullptr : &trace);
      log(Verbosity::info, std::string(to_string(out.status)) + " after " + std::to_string(out.nodes_explored) + " nodes");
      emit(solver::to_json(out), sv_out);
      return 0;
    }

    if (*verify) {
      const auto catalog = load_catalog(vf_catalog);
      const auto aq = annotated_query_from_json(read_json(vf_query));
      const auto cs = parse_all(vf_constraints.empty() ? aq.constraints : read_constraint_texts(vf_constraints));
      const auto check = diagnostics::check_plan(read_plan(vf_plan), cs, catalog, aq.query);
      emit(json{{"clean", check.findings.empty()}, {"findings", to_json_array(check.findings)}}, "");
      return 0;
    }

    if (*ctx) {
      const auto catalog = load_catalog(cx_catalog);
      const auto level = kContextLevelNames.parse(cx_level, "context level");
      const auto ref = plan_from_json(read_plan(cx_plan));
      std::optional<Itinerary> faulty;
      if (!cx_faulty.empty()) faulty = plan_from_json(read_plan(cx_faulty));
      std::optional<context::DistractorPool> pool;
      if (!cx_query.empty()) {
        const auto aq = annotated_query_from_json(read_json(cx_query));
        const auto cs = parse_all(cx_constraints.empty() ? aq.constraints : read_constraint_texts(cx_constraints));
        pool = context::distractor_pool(aq.query, cs, catalog, solver::default_policy(aq.query.profile));
      }
      const auto built = context::build(ref.query_id + "/context", ref, faulty ? &*faulty : nullptr, catalog,
                                        {level, cx_seed}, pool ? &*pool : nullptr);
      for (const auto& s : built.shortfalls)
        log(Verbosity::info, "shortfall: " + context::to_json(s).dump());
      const auto tokens = context::token_estimate(built.context, catalog);
      if (context::exceeds_token_budget(tokens))
        log(Verbosity::info, "warning: context is about " + std::to_string(tokens) + " tokens");
      emit(cx_hydrate ? context::hydrate(built.context, catalog) : to_json(built.context), cx_out);
      return 0;
    }

    if (*runc) {
      const auto ds = harness::read_dataset(rn_cases);
      harness::EndpointConfig ep;
      ep.target = rn_agent;
      ep.timeout = std::chrono::milliseconds(static_cast<std::int64_t>(rn_timeout * 1000));
      harness::RunOptions opt;
      opt.parallel = rn_parallel;
      opt.max_retries = rn_retries;
      opt.subtasks = parse_subtasks(rn_subtasks);
      const auto rep = harness::run(ds, harness::endpoint_factory(ep), opt);
      const json config{{"cases", rn_cases}, {"agent", rn_agent}, {"parallel", rn_parallel},
                        {"timeout_s", rn_timeout}, {"retries", rn_retries}, {"subtasks", rn_subtasks}};
      write_report(config, rep, rn_out, rn_csv);
      if (verbosity() >= Verbosity::info) print_summary(rep.aggregate);
      return 0;
    }

    if (*score) {
      const auto ds = harness::read_dataset(sc_cases);
      harness::RunOptions opt;
      opt.subtasks = parse_subtasks(sc_subtasks);
      const auto rep = harness::score_responses(ds, read_json_lines(sc_responses), opt);
      write_report(json{{"cases", sc_cases}, {"responses", sc_responses}}, rep, sc_out, sc_csv);
      if (!sc_out.empty() && verbosity() >= Verbosity::info) print_summary(rep.aggregate);
      return 0;
    }

    if (*demo) {
      synth::GenSpec spec;
      spec.seed = dm_seed;
      spec.profile = kProfileNames.parse(dm_profile, "profile");
      spec.queries = dm_queries;
      if (!dm_spec.empty()) spec = synth::gen_spec_from_json(read_json(dm_spec), spec);
      spec.check();
      const auto g = synth::generate(spec);
      save_catalog(g.catalog, fs::path(dm_out) / "catalog");
      std::string lines;
      for (const auto& q : g.queries) {
        auto j = to_json(q.annotated);
        j["reference"] = to_json(q.reference);
        lines += j.dump() + "\n";
      }
      write_text_file(fs::path(dm_out) / "queries.jsonl", lines);
      write_text_file(fs::path(dm_out) / "spec.json", synth::to_json(spec).dump(2) + "\n");
      log(Verbosity::info, "wrote " + std::to_string(g.catalog.size()) + " records and " + std::to_string(g.queries.size()) +
                               " queries to " + dm_out);
      return 0;
    }
  } catch (const UsageError& e) {
    std::cerr << "tripdiag: usage: " << e.what() << "\n";
    return 1;
  } catch (const EndpointError& e) {
    std::cerr << "tripdiag: endpoint: " << e.what() << "\n";
    return 3;
  } catch (const Error& e) {
    std::cerr << "tripdiag: data: " << e.what() << "\n";
    return 2;
  } catch (const json::exception& e) {
    std::cerr << "tripdiag: data: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
