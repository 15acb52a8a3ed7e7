// SPDX-License-Identifier: Apache-2.0
#pragma once

// Batch aggregation of CaseResults and the JSON / CSV report forms. Set
// metrics are reported both micro-averaged (summed counts) and
// macro-averaged (mean of per-case values); rates are exact ratios of
// counts wherever the underlying quantity is a count.

#include <algorithm>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "tripdiag/diagnostics/score.hpp"

namespace tripdiag::diagnostics {

/// One aggregate value: exact when it is a ratio of counts.
struct Stat {
  std::string name;
  double value = 0;
  std::optional<Ratio> exact;
};

struct SubtaskAggregate {
  Subtask subtask = Subtask::extraction;
  std::size_t cases = 0;
  std::size_t failures = 0;  // timeouts and malformed responses
  std::vector<Stat> stats;
  json breakdown = json::object();  // per head / category / error count

  const Stat* find(std::string_view name) const {
    for (const auto& s : stats)
      if (s.name == name) return &s;
    return nullptr;
  }
  double value(std::string_view name) const {
    const auto* s = find(name);
    if (!s) throw UsageError("aggregate has no statistic '" + std::string(name) + "'");
    return s->value;
  }
  Ratio exact(std::string_view name) const {
    const auto* s = find(name);
    if (!s || !s->exact) throw UsageError("aggregate has no exact statistic '" + std::string(name) + "'");
    return *s->exact;
  }
};

struct AggregateReport {
  std::vector<SubtaskAggregate> subtasks;
  sandbox::ConfusionCounter confusion;

  const SubtaskAggregate* find(Subtask s) const {
    for (const auto& a : subtasks)
      if (a.subtask == s) return &a;
    return nullptr;
  }
};

namespace detail {

inline std::size_t count(const json& payload, const char* key) {
  auto it = payload.find(key);
  return it == payload.end() ? 0 : it->get<std::size_t>();
}

struct Builder {
  SubtaskAggregate& a;

  void exact(std::string name, Ratio r) { a.stats.push_back({std::move(name), r.value(), r}); }
  void real(std::string name, double v) { a.stats.push_back({std::move(name), v, std::nullopt}); }

  void mean_of(const std::vector<const CaseResult*>& cs, const std::string& metric, const std::string& name) {
    if (cs.empty()) return real(name, 0);
    double s = 0;
    for (const auto* c : cs) s += c->metric(metric).value();
    real(name, s / static_cast<double>(cs.size()));
  }

  void rate(const std::vector<const CaseResult*>& cs, const std::string& metric, const std::string& name) {
    std::size_t k = 0;
    for (const auto* c : cs)
      if (c->metric(metric) == Ratio(1, 1)) ++k;
    exact(name, ratio_of(k, cs.size()));
  }
};

inline Ratio micro(std::size_t num, std::size_t den, bool both_empty) {
  return den ? ratio_of(num, den) : Ratio(both_empty ? 1 : 0, 1);
}

inline void add_set_stats(Builder& b, const std::vector<const CaseResult*>& cs, const char* group_key) {
  std::size_t tp = 0, pred = 0, gold = 0, matched = 0;
  std::map<std::string, std::array<std::size_t, 3>> groups;
  for (const auto* c : cs) {
    tp += count(c->payload, "tp");
    pred += count(c->payload, "pred_count");
    gold += count(c->payload, "gold_count");
    matched += count(c->payload, "matched_gold");
    if (auto it = c->payload.find(group_key); it != c->payload.end())
      for (const auto& [k, v] : it->items()) {
        groups[k][0] += v["tp"].get<std::size_t>();
        groups[k][1] += v["fp"].get<std::size_t>();
        groups[k][2] += v["fn"].get<std::size_t>();
      }
  }
  const bool both_empty = pred == 0 && gold == 0;
  const auto p = micro(tp, pred, both_empty), r = micro(matched, gold, both_empty);
  b.exact("micro_precision", p);
  b.exact("micro_recall", r);
  b.exact("micro_f1", harmonic_f1(p, r));
  b.mean_of(cs, "precision", "macro_precision");
  b.mean_of(cs, "recall", "macro_recall");
  b.mean_of(cs, "f1", "macro_f1");
  b.rate(cs, "exact_match", "exact_match_rate");
  json per = json::object();
  for (const auto& [k, c] : groups) {
    const auto gp = c[0] + c[1], gg = c[0] + c[2];
    per[k] = json{{"tp", c[0]},
                  {"fp", c[1]},
                  {"fn", c[2]},
                  {"precision", gp ? ratio_of(c[0], gp).value() : 0.0},
                  {"recall", gg ? ratio_of(c[0], gg).value() : 0.0}};
  }
  b.a.breakdown[group_key] = per;
}

inline void add_plan_stats(Builder& b, const std::vector<const CaseResult*>& cs) {
  b.rate(cs, "delivered", "delivery_rate");
  b.rate(cs, "structural_pass", "structural_pass_rate");
  b.rate(cs, "constraint_pass", "constraint_pass_rate");
  b.rate(cs, "pass", "pass_rate");
  std::size_t met = 0, total = 0;
  std::map<std::string, std::size_t> cats;
  for (const auto* c : cs) {
    met += count(c->payload, "constraints_met");
    total += count(c->payload, "constraints");
    if (auto it = c->payload.find("categories"); it != c->payload.end())
      for (const auto& k : *it) ++cats[k.get<std::string>()];
  }
  b.exact("constraint_micro_pass_rate", micro(met, total, false));
  b.a.breakdown["error_types"] = cats;
}

}  // namespace detail

/// Folds per-case results into per-subtask aggregates. Input order does not
/// matter: cases are sorted by id first.
inline AggregateReport aggregate(std::vector<CaseResult> results, const sandbox::ConfusionCounter& confusion = {}) {
  std::sort(results.begin(), results.end(), [](const auto& a, const auto& b) { return a.case_id < b.case_id; });
  AggregateReport rep;
  rep.confusion = confusion;
  for (auto st : kAllSubtasks) {
    std::vector<const CaseResult*> cs;
    for (const auto& r : results)
      if (r.subtask == st) cs.push_back(&r);
    if (cs.empty()) continue;
    SubtaskAggregate a;
    a.subtask = st;
    a.cases = cs.size();
    for (const auto* c : cs) a.failures += !c->failure.empty();
    detail::Builder b{a};
    std::size_t passed = 0;
    for (const auto* c : cs) passed += c->pass;
    switch (st) {
      case Subtask::extraction:
        detail::add_set_stats(b, cs, "per_head");
        break;
      case Subtask::identification: {
        detail::add_set_stats(b, cs, "per_category");
        json by = json::object();
        std::map<std::size_t, std::vector<const CaseResult*>> groups;
        for (const auto* c : cs) groups[detail::count(c->payload, "error_count")].push_back(c);
        for (const auto& [k, g] : groups) {
          SubtaskAggregate sub;
          detail::Builder sb{sub};
          detail::add_set_stats(sb, g, "per_category");
          json s = json::object();
          for (const auto& x : sub.stats) s[x.name] = x.value;
          s["cases"] = g.size();
          by["E" + std::to_string(k)] = s;
        }
        a.breakdown["by_error_count"] = by;
        break;
      }
      case Subtask::tool_use: {
        std::size_t n = 0, tool = 0, param = 0, overall = 0;
        for (const auto* c : cs) {
          n += detail::count(c->payload, "n");
          tool += detail::count(c->payload, "tool_ok");
          param += detail::count(c->payload, "params_ok");
          overall += detail::count(c->payload, "overall_ok");
        }
        b.exact("tool_accuracy", detail::micro(tool, n, false));
        b.exact("param_accuracy", detail::micro(param, n, false));
        b.exact("overall_accuracy", detail::micro(overall, n, false));
        b.exact("case_pass_rate", ratio_of(passed, cs.size()));
        a.breakdown["confusion"] = confusion.to_json();
        break;
      }
      case Subtask::plan_generation: {
        detail::add_plan_stats(b, cs);
        std::size_t ok = 0, full = 0;
        double coverage = 0;
        for (const auto* c : cs)
          if (c->pass && c->payload.contains("poi_matched")) {
            ++ok;
            full += c->payload["poi_matched"].get<bool>();
            const auto& cov = c->payload["poi_coverage"];
            coverage += Ratio(cov["num"].get<std::int64_t>(), cov["den"].get<std::int64_t>()).value();
          }
        b.exact("match_rate", ratio_of(full, ok));
        b.real("coverage", ok ? coverage / static_cast<double>(ok) : 0);
        break;
      }
      case Subtask::correction: {
        detail::add_plan_stats(b, cs);
        b.mean_of(cs, "persistence", "persistence");
        std::map<std::size_t, std::pair<double, std::size_t>> by;
        for (const auto* c : cs) {
          auto& slot = by[detail::count(c->payload, "error_count")];
          slot.first += c->metric("persistence").value();
          ++slot.second;
        }
        json j = json::object();
        for (const auto& [k, v] : by)
          j["E" + std::to_string(k)] = json{{"persistence", v.first / static_cast<double>(v.second)}, {"cases", v.second}};
        a.breakdown["persistence_by_error_count"] = j;
        break;
      }
    }
    rep.subtasks.push_back(std::move(a));
  }
  return rep;
}

inline json to_json(const CaseResult& r) {
  json m = json::object();
  for (const auto& [k, v] : r.metrics) m[k] = json{{"value", v.value()}, {"exact", v.str()}};
  json j{{"case_id", r.case_id}, {"subtask", to_string(r.subtask)}, {"pass", r.pass}, {"metrics", m}, {"payload", r.payload}};
  if (!r.failure.empty()) j["failure"] = r.failure;
  return j;
}

inline json to_json(const SubtaskAggregate& a) {
  json stats = json::object();
  for (const auto& s : a.stats) {
    stats[s.name] = s.value;
    if (s.exact) stats[s.name + "_exact"] = s.exact->str();
  }
  return json{{"cases", a.cases}, {"failures", a.failures}, {"stats", stats}, {"breakdown", a.breakdown}};
}

/// The full report document: config, per-case records sorted by id, and
/// per-subtask aggregates.
inline json report_json(const json& config, std::vector<CaseResult> results, const AggregateReport& agg) {
  std::sort(results.begin(), results.end(), [](const auto& a, const auto& b) { return a.case_id < b.case_id; });
  json per = json::array();
  for (const auto& r : results) per.push_back(to_json(r));
  json aggs = json::object();
  for (const auto& a : agg.subtasks) aggs[std::string(to_string(a.subtask))] = to_json(a);
  return json{{"config", config}, {"per_case", per}, {"aggregates", aggs}, {"confusion_pairs", agg.confusion.to_json()}};
}

namespace detail {
inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}
}  // namespace detail

/// Long-format per-case CSV: one row per (case, metric).
inline std::string per_case_csv(std::vector<CaseResult> results) {
  std::sort(results.begin(), results.end(), [](const auto& a, const auto& b) { return a.case_id < b.case_id; });
  std::ostringstream out;
  out << "case_id,subtask,pass,failure,metric,value\n";
  for (const auto& r : results)
    for (const auto& [k, v] : r.metrics)
      out << detail::csv_field(r.case_id) << ',' << to_string(r.subtask) << ',' << (r.pass ? 1 : 0) << ','
          << detail::csv_field(r.failure) << ',' << k << ',' << v.str() << '\n';
  return out.str();
}

inline std::string aggregate_csv(const AggregateReport& agg) {
  std::ostringstream out;
  out << "subtask,statistic,value\n";
  for (const auto& a : agg.subtasks) {
    out << to_string(a.subtask) << ",cases," << a.cases << '\n';
    out << to_string(a.subtask) << ",failures," << a.failures << '\n';
    for (const auto& s : a.stats) out << to_string(a.subtask) << ',' << s.name << ',' << (s.exact ? s.exact->str() : json(s.value).dump()) << '\n';
  }
  return out.str();
}

}  // namespace tripdiag::diagnostics
