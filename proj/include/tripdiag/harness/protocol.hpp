// SPDX-License-Identifier: Apache-2.0
#pragma once

// Wire protocol, one JSON document per line in each direction.
//   request:  {"protocol": 1, "case_id", "subtask", "inputs": {...}}
//   response: {"case_id", "output": {...}}
// Outputs per subtask:
//   extraction       {"constraints": ["<dsl>", ...]}
//   tool_use         {"calls": ["Tool(args)" | {"tool_name", "arguments"}, ...]}
//   plan_generation  {"plan": <itinerary>}
//   identification   {"findings": [{"category", "constraint"?, ...}, ...]}
//   correction       {"plan": <itinerary>}

#include <optional>
#include <string>
#include <vector>

#include "tripdiag/core/schema.hpp"
#include "tripdiag/diagnostics.hpp"
#include "tripdiag/harness/task.hpp"
#include "tripdiag/sandbox/call_text.hpp"

namespace tripdiag::harness {

inline constexpr int kProtocolVersion = 1;

inline json make_request(const TaskCase& c) {
  return json{{"protocol", kProtocolVersion}, {"case_id", c.case_id}, {"subtask", to_string(c.subtask)}, {"inputs", c.inputs}};
}

/// What a well-formed but empty answer looks like.
inline json empty_output(Subtask s) {
  switch (s) {
    case Subtask::extraction: return json{{"constraints", json::array()}};
    case Subtask::tool_use: return json{{"calls", json::array()}};
    case Subtask::identification: return json{{"findings", json::array()}};
    default: return json{{"plan", json::object()}};
  }
}

/// The output an agent with perfect answers returns. Tool calls go out as
/// call text so the round trip exercises the parser.
inline json gold_output(const TaskCase& c) {
  switch (c.subtask) {
    case Subtask::extraction: return json{{"constraints", c.gold.at("constraints")}};
    case Subtask::tool_use: {
      json calls = json::array();
      for (const auto& g : c.gold.at("calls")) calls.push_back(sandbox::render_call_text(tool_call_from_json(g)));
      return json{{"calls", calls}};
    }
    case Subtask::identification: return json{{"findings", c.gold.at("findings")}};
    default: return json{{"plan", c.gold.at("plan")}};
  }
}

/// Agent-side failure of one case: timeout, crash, malformed reply.
class CaseFailure : public Error {
public:
  using Error::Error;
};

/// Checks the envelope and returns `output`. Throws CaseFailure.
inline json unwrap_response(const TaskCase& c, const json& response) {
  if (!response.is_object()) throw CaseFailure("malformed: response is not an object");
  const auto id = response.find("case_id");
  if (id == response.end() || !id->is_string()) throw CaseFailure("malformed: missing case_id");
  if (id->get<std::string>() != c.case_id) throw CaseFailure("malformed: case_id mismatch");
  const auto out = response.find("output");
  if (out == response.end() || !out->is_object()) throw CaseFailure("malformed: missing output object");
  return *out;
}

namespace detail {

inline const json& output_list(const json& output, const char* key) {
  const auto it = output.find(key);
  if (it == output.end() || !it->is_array()) throw CaseFailure(std::string("malformed: output.") + key + " must be a list");
  return *it;
}

inline std::vector<dsl::Expr> case_constraints(const TaskCase& c) {
  std::vector<dsl::Expr> out;
  for (const auto& t : c.inputs.at("constraints")) out.push_back(dsl::parse(t.get<std::string>()));
  return out;
}

inline std::vector<ErrorFinding> findings_of(const json& list) {
  std::vector<ErrorFinding> out;
  for (const auto& f : list) out.push_back(finding_from_json(f));
  return out;
}

}  // namespace detail

/// Scores a case output. Throws CaseFailure when the output does not follow
/// the subtask schema; plan documents are instead judged by the schema check.
inline diagnostics::CaseResult score_output(const TaskCase& c, const json& output, const PoiCatalog& catalog,
                                            sandbox::ConfusionCounter* confusion = nullptr) {
  using namespace diagnostics;
  switch (c.subtask) {
    case Subtask::extraction: {
      std::vector<std::string> pred;
      for (const auto& t : detail::output_list(output, "constraints")) {
        if (!t.is_string()) throw CaseFailure("malformed: constraints must be strings");
        pred.push_back(t.get<std::string>());
      }
      return score_extraction(c.case_id, pred, c.gold.at("constraints").get<std::vector<std::string>>());
    }
    case Subtask::tool_use: {
      std::vector<ToolCall> pred, gold;
      for (const auto& t : detail::output_list(output, "calls")) {
        try {
          pred.push_back(t.is_string() ? sandbox::parse_call_text(t.get<std::string>()) : tool_call_from_json(t));
        } catch (const Error&) {
          pred.push_back(ToolCall{"<unparsed>", {}});
        } catch (const json::exception&) {
          pred.push_back(ToolCall{"<unparsed>", {}});
        }
      }
      for (const auto& g : c.gold.at("calls")) gold.push_back(tool_call_from_json(g));
      return score_tool_use(c.case_id, pred, gold, confusion);
    }
    case Subtask::plan_generation: {
      const auto it = output.find("plan");
      if (it == output.end()) throw CaseFailure("malformed: missing output.plan");
      const auto q = query_from_json(c.inputs.at("query"));
      const auto ref = plan_from_json(c.gold.at("plan"), &q);
      return score_plan(c.case_id, *it, detail::case_constraints(c), catalog, q, &ref);
    }
    case Subtask::identification: {
      std::vector<ErrorFinding> pred;
      try {
        pred = detail::findings_of(detail::output_list(output, "findings"));
      } catch (const CaseFailure&) {
        throw;
      } catch (const std::exception& e) {
        throw CaseFailure(std::string("malformed: ") + e.what());
      }
      return score_identification(c.case_id, pred, detail::findings_of(c.gold.at("findings")));
    }
    case Subtask::correction: {
      const auto it = output.find("plan");
      if (it == output.end()) throw CaseFailure("malformed: missing output.plan");
      const auto q = query_from_json(c.inputs.at("query"));
      return score_correction(c.case_id, *it, detail::findings_of(c.inputs.at("findings")), detail::case_constraints(c),
                              catalog, q);
    }
  }
  throw UsageError("unknown subtask");
}

/// Scores a response envelope, or a failure when `response` is absent.
/// Never throws for agent mistakes: they become one failed CaseResult.
inline diagnostics::CaseResult score_case(const TaskCase& c, const std::optional<json>& response, const std::string& failure,
                                          const PoiCatalog& catalog, sandbox::ConfusionCounter* confusion = nullptr) {
  std::string why = failure;
  if (response && why.empty()) {
    sandbox::ConfusionCounter local;
    try {
      auto r = score_output(c, unwrap_response(c, *response), catalog, &local);
      if (confusion) confusion->merge(local);
      return r;
    } catch (const CaseFailure& e) {
      why = e.what();
    } catch (const json::exception& e) {
      why = std::string("malformed: ") + e.what();
    }
  }
  if (why.empty()) why = "no response";
  auto r = score_output(c, empty_output(c.subtask), catalog);
  diagnostics::mark_failed(r, why);
  return r;
}

}  // namespace tripdiag::harness
