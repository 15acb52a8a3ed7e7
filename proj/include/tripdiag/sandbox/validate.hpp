// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "tripdiag/sandbox/filter.hpp"
#include "tripdiag/sandbox/registry.hpp"

namespace tripdiag::sandbox {

struct ArgumentVerdict {
  std::string name;
  std::string expected;                 // normalized
  std::optional<std::string> predicted;  // normalized; empty when absent
  bool ok = false;
};

struct ValidationReport {
  bool tool_ok = false;
  bool params_ok = false;
  bool overall_ok = false;
  std::vector<ArgumentVerdict> detail;
};

namespace detail {

/// Arguments keyed by normalized parameter name; positional names are
/// resolved against the call's own tool when it is known.
inline std::map<std::string, json> named_arguments(const ToolCall& call) {
  std::map<std::string, json> out;
  const ToolSpec* spec = find_tool(call.tool_name);
  for (std::size_t i = 0; i < call.arguments.size(); ++i) {
    const auto& [name, value] = call.arguments[i];
    std::string key = normalize_tool_name(name);
    if (spec && !spec->param(name)) {
      std::string_view s = name;
      if (s.starts_with("arg")) s.remove_prefix(3);
      if (!s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
        const auto idx = std::stoul(std::string(s));
        if (idx < spec->params.size()) key = normalize_tool_name(spec->params[idx].name);
      }
    }
    out.emplace(key, value);
  }
  return out;
}

inline std::string generic_value(const json& v) {
  if (v.is_string()) return fold_text(v.get<std::string>());
  if (v.is_number()) return number_str(v.get<double>());
  if (v.is_array()) {
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + generic_value(v[i]);
    return s + "]";
  }
  return v.dump();
}

inline std::string normalized_value(ParamType t, const json& v, const std::map<std::string, json>& siblings) {
  switch (t) {
    case ParamType::date:
      if (auto d = normalize_date(v)) return *d;
      break;
    case ParamType::clock:
      if (auto c = normalize_clock(v)) return *c;
      break;
    case ParamType::mode:
      if (v.is_string()) return normalize_mode(v.get<std::string>());
      break;
    case ParamType::integer:
    case ParamType::number:
      if (auto n = number_value(v)) return number_str(*n);
      break;
    case ParamType::date_range:
      if (v.is_array()) {
        std::string s;
        for (const auto& d : v) s += (s.empty() ? "" : "..") + normalize_date(d).value_or(generic_value(d));
        return s;
      }
      break;
    case ParamType::field_key:
      if (v.is_string()) {
        try {
          return std::string(dsl::to_string(filter_field(v.get<std::string>())));
        } catch (const Error&) {
        }
      }
      break;
    case ParamType::filter:
      if (v.is_string()) {
        auto key = siblings.find("key");
        try {
          const std::string k = key != siblings.end() && key->second.is_string() ? key->second.get<std::string>() : "price";
          return parse_filter(k, v.get<std::string>()).canonical();
        } catch (const Error&) {
        }
      }
      break;
    default: break;
  }
  return generic_value(v);
}

}  // namespace detail

/// Compares a predicted call with the gold call. Tool names match after
/// normalization; every gold argument must be present with an equal
/// normalized value. Extra predicted arguments are not penalized.
inline ValidationReport validate_call(const ToolCall& call, const ToolCall& expected) {
  ValidationReport r;
  const ToolSpec* gold_spec = find_tool(expected.tool_name);
  const ToolSpec* pred_spec = find_tool(call.tool_name);
  r.tool_ok = (gold_spec && pred_spec) ? gold_spec == pred_spec
                                        : normalize_tool_name(call.tool_name) == normalize_tool_name(expected.tool_name);

  const auto gold_args = detail::named_arguments(expected);
  const auto pred_args = detail::named_arguments(call);
  r.params_ok = true;
  for (const auto& [key, gv] : gold_args) {
    ArgumentVerdict v;
    v.name = key;
    ParamType type = ParamType::text;
    bool typed = false;
    if (gold_spec) {
      if (const auto* p = gold_spec->param(key)) {
        type = p->type;
        typed = true;
      }
    }
    v.expected = typed ? detail::normalized_value(type, gv, gold_args) : detail::generic_value(gv);
    if (auto it = pred_args.find(key); it != pred_args.end()) {
      v.predicted = typed ? detail::normalized_value(type, it->second, pred_args) : detail::generic_value(it->second);
      v.ok = *v.predicted == v.expected;
    }
    r.params_ok = r.params_ok && v.ok;
    r.detail.push_back(std::move(v));
  }
  r.overall_ok = r.tool_ok && r.params_ok;
  return r;
}

/// (gold tool -> predicted tool) substitution counts, keyed by display name.
class ConfusionCounter {
public:
  void record(const std::string& gold_tool, const std::string& pred_tool, std::size_t n = 1) {
    counts_[{label(gold_tool), label(pred_tool)}] += n;
  }

  void merge(const ConfusionCounter& other) {
    for (const auto& [k, n] : other.counts_) counts_[k] += n;
  }

  struct Pair {
    std::string gold;
    std::string pred;
    std::size_t count = 0;
  };

  /// Pairs by descending count, then by name.
  std::vector<Pair> top(std::size_t n = SIZE_MAX) const {
    std::vector<Pair> v;
    for (const auto& [k, c] : counts_) v.push_back({k.first, k.second, c});
    std::stable_sort(v.begin(), v.end(), [](const Pair& a, const Pair& b) { return a.count > b.count; });
    if (v.size() > n) v.resize(n);
    return v;
  }

  std::string to_csv() const {
    std::string out = "gold_tool,pred_tool,count\n";
    for (const auto& p : top()) out += p.gold + "," + p.pred + "," + std::to_string(p.count) + "\n";
    return out;
  }

  json to_json() const {
    json arr = json::array();
    for (const auto& p : top()) arr.push_back(json{{"gold", p.gold}, {"pred", p.pred}, {"count", p.count}});
    return arr;
  }

  bool empty() const { return counts_.empty(); }

private:
  static std::string label(const std::string& name) {
    const auto* spec = find_tool(name);
    return display_name(spec ? spec->name : name);
  }

  std::map<std::pair<std::string, std::string>, std::size_t> counts_;
};

}  // namespace tripdiag::sandbox
