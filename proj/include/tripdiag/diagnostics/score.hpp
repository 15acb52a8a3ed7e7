// SPDX-License-Identifier: Apache-2.0
#pragma once

// Per-case scoring for the five sub-tasks. Every scorer is a pure function
// of its inputs and never throws on malformed agent output.

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "tripdiag/core/schema.hpp"
#include "tripdiag/dsl/match.hpp"
#include "tripdiag/sandbox/validate.hpp"
#include "tripdiag/solver/verify.hpp"

namespace tripdiag::diagnostics {

struct CaseResult {
  std::string case_id;
  Subtask subtask = Subtask::extraction;
  bool pass = false;
  std::vector<std::pair<std::string, Ratio>> metrics;  // in emission order
  json payload = json::object();
  std::string failure;  // "timeout", "malformed response: ...", or empty

  Ratio metric(std::string_view name) const {
    for (const auto& [k, v] : metrics)
      if (k == name) return v;
    throw UsageError("case " + case_id + " has no metric '" + std::string(name) + "'");
  }
  void set(std::string name, Ratio v) { metrics.emplace_back(std::move(name), v); }
};

inline CaseResult new_case(const std::string& case_id, Subtask subtask) {
  CaseResult r;
  r.case_id = case_id;
  r.subtask = subtask;
  return r;
}

inline Ratio ratio_of(std::size_t num, std::size_t den) {
  return Ratio(static_cast<std::int64_t>(num), static_cast<std::int64_t>(den));
}
inline Ratio flag(bool b) { return Ratio(b ? 1 : 0, 1); }

inline json counts_json(std::size_t tp, std::size_t fp, std::size_t fn) { return json{{"tp", tp}, {"fp", fp}, {"fn", fn}}; }

inline void put_set_metrics(CaseResult& r, const MatchReport& m) {
  r.set("precision", m.precision);
  r.set("recall", m.recall);
  r.set("f1", m.f1);
  r.set("exact_match", flag(m.exact_match));
  r.pass = m.exact_match;
  r.payload["tp"] = m.tp;
  r.payload["fp"] = m.fp;
  r.payload["fn"] = m.fn;
  r.payload["pred_count"] = m.pred_count;
  r.payload["gold_count"] = m.gold_count;
  r.payload["matched_gold"] = m.matched_gold;
}

// ---- extraction -------------------------------------------------------------

inline std::string head_label(const dsl::Expr& e) {
  const auto h = dsl::primary_head(e);
  return h ? std::string(dsl::to_string(*h)) : "constant";
}

/// Set metrics plus a tp/fp/fn breakdown by accessor head. Predictions that
/// do not parse are false positives under the head "unparsed".
inline CaseResult score_extraction(const std::string& case_id, const std::vector<std::string>& pred,
                                   const std::vector<std::string>& gold) {
  auto r = new_case(case_id, Subtask::extraction);
  const auto m = match_texts(pred, gold);
  put_set_metrics(r, m);
  std::map<std::string, std::array<std::size_t, 3>> heads;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    std::string label = "unparsed";
    try {
      label = head_label(dsl::parse(pred[i]));
    } catch (const Error&) {
    }
    ++heads[label][m.pairing[i] ? 0 : 1];
  }
  std::set<std::size_t> hit;
  for (const auto& p : m.pairing)
    if (p) hit.insert(*p);
  for (std::size_t g = 0; g < gold.size(); ++g)
    if (!hit.count(g)) ++heads[head_label(dsl::parse(gold[g]))][2];
  json per_head = json::object();
  for (const auto& [h, c] : heads) per_head[h] = counts_json(c[0], c[1], c[2]);
  r.payload["per_head"] = per_head;
  return r;
}

// ---- tool use ---------------------------------------------------------------

/// Calls are aligned by position; a missing prediction fails every check.
/// Wrong-tool calls are added to `confusion` when given.
inline CaseResult score_tool_use(const std::string& case_id, const std::vector<ToolCall>& pred,
                                 const std::vector<ToolCall>& gold, sandbox::ConfusionCounter* confusion = nullptr) {
  auto r = new_case(case_id, Subtask::tool_use);
  std::size_t tool = 0, param = 0, overall = 0;
  json calls = json::array();
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (i >= pred.size()) {
      calls.push_back(json{{"tool_ok", false}, {"params_ok", false}, {"overall_ok", false}, {"missing", true}});
      continue;
    }
    const auto v = sandbox::validate_call(pred[i], gold[i]);
    tool += v.tool_ok;
    param += v.params_ok;
    overall += v.overall_ok;
    if (!v.tool_ok && confusion) confusion->record(gold[i].tool_name, pred[i].tool_name);
    json args = json::array();
    for (const auto& a : v.detail) args.push_back(json{{"name", a.name}, {"expected", a.expected}, {"predicted", a.predicted ? json(*a.predicted) : json()}, {"ok", a.ok}});
    calls.push_back(json{{"tool_ok", v.tool_ok}, {"params_ok", v.params_ok}, {"overall_ok", v.overall_ok},
                         {"gold_tool", gold[i].tool_name}, {"pred_tool", pred[i].tool_name}, {"arguments", args}});
  }
  const auto n = gold.size();
  r.set("tool_accuracy", n ? ratio_of(tool, n) : flag(pred.empty()));
  r.set("param_accuracy", n ? ratio_of(param, n) : flag(pred.empty()));
  r.set("overall_accuracy", n ? ratio_of(overall, n) : flag(pred.empty()));
  r.pass = overall == n && pred.size() == n;
  r.payload["calls"] = calls;
  r.payload["n"] = n;
  r.payload["tool_ok"] = tool;
  r.payload["params_ok"] = param;
  r.payload["overall_ok"] = overall;
  r.payload["extra_calls"] = pred.size() > n ? pred.size() - n : 0;
  return r;
}

// ---- plans ------------------------------------------------------------------

/// Match Rate / Coverage ingredients for one plan against a reference.
struct PoiOverlap {
  bool matched = false;  // same POI multiset
  Ratio coverage;        // |ids(pred) & ids(ref)| / |ids(ref)|
};

inline PoiOverlap poi_overlap(const Itinerary& pred, const Itinerary& ref) {
  std::multiset<std::string> pm, rm;
  for (const auto& d : pred.days)
    for (const auto& it : d.items) pm.insert(it.poi_id);
  for (const auto& d : ref.days)
    for (const auto& it : d.items) rm.insert(it.poi_id);
  const std::set<std::string> ps(pm.begin(), pm.end()), rs(rm.begin(), rm.end());
  std::size_t common = 0;
  for (const auto& id : rs) common += ps.count(id);
  return {pm == rm, rs.empty() ? flag(ps.empty()) : ratio_of(common, rs.size())};
}

inline json findings_json(const std::vector<ErrorFinding>& fs) {
  json a = json::array();
  for (const auto& f : fs) a.push_back(to_json(f));
  return a;
}

inline std::vector<ErrorFinding> schema_findings(const SchemaResult& s) {
  std::vector<ErrorFinding> out;
  for (const auto& e : s.errors)
    out.push_back({FindingCategory::schema_error, std::nullopt, std::nullopt, e.path + ": " + e.message});
  return out;
}

struct PlanCheck {
  std::optional<Itinerary> plan;
  std::vector<ErrorFinding> findings;
  std::size_t structural = 0;  // findings before the constraint ones
  std::size_t constraints_met = 0;
};

inline PlanCheck check_plan(const json& raw, const std::vector<dsl::Expr>& constraints, const PoiCatalog& catalog,
                            const Query& query) {
  PlanCheck c;
  auto s = validate_schema(raw, &query);
  if (!s.ok()) {
    c.findings = schema_findings(s);
    c.structural = c.findings.size();
    return c;
  }
  c.plan = std::move(s.plan);
  c.findings = solver::structural_findings(*c.plan, catalog, query);
  c.structural = c.findings.size();
  const dsl::Evaluator ev(*c.plan, catalog, query);
  for (const auto& k : constraints) {
    if (ev.holds(k)) ++c.constraints_met;
    else c.findings.push_back({dsl::category_of(k), dsl::canonical_text(k), std::nullopt, "constraint not satisfied"});
  }
  return c;
}

inline void put_plan_metrics(CaseResult& r, const PlanCheck& c, std::size_t n_constraints) {
  r.pass = c.plan && c.findings.empty();
  r.set("delivered", flag(c.plan.has_value()));
  r.set("structural_pass", flag(c.plan && c.structural == 0));
  r.set("constraint_pass", flag(c.plan && c.constraints_met == n_constraints));
  r.set("constraint_micro", n_constraints ? ratio_of(c.constraints_met, n_constraints) : flag(c.plan.has_value()));
  r.set("pass", flag(r.pass));
  json cats = json::array();
  for (auto cat : solver::categories(c.findings)) cats.push_back(to_string(cat));
  r.payload["categories"] = cats;
  r.payload["findings"] = findings_json(c.findings);
  r.payload["constraints_met"] = c.constraints_met;
  r.payload["constraints"] = n_constraints;
}

/// Pass iff the document is schema-valid and verifies clean. With a
/// reference plan, passing plans also carry POI match and coverage.
inline CaseResult score_plan(const std::string& case_id, const json& raw, const std::vector<dsl::Expr>& constraints,
                             const PoiCatalog& catalog, const Query& query, const Itinerary* ref = nullptr) {
  auto r = new_case(case_id, Subtask::plan_generation);
  const auto c = check_plan(raw, constraints, catalog, query);
  put_plan_metrics(r, c, constraints.size());
  if (ref && r.pass) {
    const auto o = poi_overlap(*c.plan, *ref);
    r.payload["poi_matched"] = o.matched;
    r.payload["poi_coverage"] = json{{"num", o.coverage.num()}, {"den", o.coverage.den()}};
  }
  return r;
}

// ---- identification ---------------------------------------------------------

inline std::optional<std::string> canonical_or_raw(const std::optional<std::string>& text) {
  if (!text) return std::nullopt;
  try {
    return dsl::canonical_text(dsl::parse(*text));
  } catch (const Error&) {
    return *text;
  }
}

/// Findings match on category, and on canonical constraint text when both
/// sides name a constraint.
inline CaseResult score_identification(const std::string& case_id, const std::vector<ErrorFinding>& pred,
                                       const std::vector<ErrorFinding>& gold) {
  auto r = new_case(case_id, Subtask::identification);
  std::vector<std::optional<std::string>> pc, gc;
  for (const auto& f : pred) pc.push_back(canonical_or_raw(f.constraint));
  for (const auto& f : gold) gc.push_back(canonical_or_raw(f.constraint));
  const auto m = match_by(pred.size(), gold.size(), [&](std::size_t p, std::size_t g) {
    return pred[p].category == gold[g].category && (!pc[p] || !gc[g] || *pc[p] == *gc[g]);
  });
  put_set_metrics(r, m);
  std::map<std::string, std::array<std::size_t, 3>> cats;
  std::set<std::size_t> hit;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    ++cats[std::string(to_string(pred[i].category))][m.pairing[i] ? 0 : 1];
    if (m.pairing[i]) hit.insert(*m.pairing[i]);
  }
  for (std::size_t g = 0; g < gold.size(); ++g)
    if (!hit.count(g)) ++cats[std::string(to_string(gold[g].category))][2];
  json per = json::object();
  for (const auto& [k, c] : cats) per[k] = counts_json(c[0], c[1], c[2]);
  r.payload["per_category"] = per;
  r.payload["error_count"] = gold.size();
  return r;
}

// ---- correction -------------------------------------------------------------

/// As score_plan, plus persistence: the share of original findings whose
/// category shows up again in the corrected plan. A plan that is not
/// delivered keeps every original finding.
inline CaseResult score_correction(const std::string& case_id, const json& raw,
                                   const std::vector<ErrorFinding>& original, const std::vector<dsl::Expr>& constraints,
                                   const PoiCatalog& catalog, const Query& query) {
  auto r = new_case(case_id, Subtask::correction);
  const auto c = check_plan(raw, constraints, catalog, query);
  put_plan_metrics(r, c, constraints.size());
  const auto now = solver::categories(c.findings);
  std::size_t again = c.plan ? 0 : original.size();
  if (c.plan)
    for (const auto& f : original) again += now.count(f.category);
  r.set("persistence", original.empty() ? Ratio() : ratio_of(again, original.size()));
  r.payload["error_count"] = original.size();
  r.payload["persisting"] = again;
  return r;
}

/// Marks a case the agent never answered properly. The caller scores it as
/// an empty response first so gold counts still enter the totals; the case
/// then fails regardless of what the empty response scored.
inline void mark_failed(CaseResult& r, std::string failure) {
  r.failure = std::move(failure);
  r.pass = false;
  for (auto& [k, v] : r.metrics)
    if (k == "exact_match" || k == "pass") v = Ratio();
}

}  // namespace tripdiag::diagnostics
