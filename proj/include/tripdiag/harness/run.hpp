// SPDX-License-Identifier: Apache-2.0
#pragma once

// Evaluation runs. Workers each own one agent and pull cases from a shared
// cursor; results land in case order whatever the completion order.

#include <atomic>
#include <exception>
#include <mutex>
#include <optional>
#include <set>
#include <thread>

#include "tripdiag/harness/agents.hpp"

namespace tripdiag::harness {

struct RunOptions {
  std::size_t parallel = 1;
  int max_retries = 0;
  std::optional<std::set<Subtask>> subtasks;  // all when empty
};

struct RunReport {
  std::vector<diagnostics::CaseResult> results;
  sandbox::ConfusionCounter confusion;
  diagnostics::AggregateReport aggregate;
};

inline std::vector<const TaskCase*> select_cases(const std::vector<TaskCase>& cases, const RunOptions& opt) {
  std::vector<const TaskCase*> out;
  for (const auto& c : cases)
    if (!opt.subtasks || opt.subtasks->count(c.subtask)) out.push_back(&c);
  return out;
}

inline RunReport finish(std::vector<diagnostics::CaseResult> results, sandbox::ConfusionCounter confusion) {
  RunReport rep{std::move(results), std::move(confusion), {}};
  rep.aggregate = diagnostics::aggregate(rep.results, rep.confusion);
  std::sort(rep.results.begin(), rep.results.end(), [](const auto& a, const auto& b) { return a.case_id < b.case_id; });
  return rep;
}

/// Throws EndpointError when an agent cannot be reached; any other agent
/// trouble fails only the case at hand.
inline RunReport run(const LoadedDataset& ds, const AgentFactory& factory, const RunOptions& opt = {}) {
  if (opt.parallel == 0) throw UsageError("parallel must be >= 1");
  const auto todo = select_cases(ds.cases, opt);
  std::vector<std::optional<diagnostics::CaseResult>> slots(todo.size());
  std::vector<sandbox::ConfusionCounter> confusion(opt.parallel);
  std::atomic<std::size_t> cursor{0};
  std::atomic<bool> abort{false};
  std::exception_ptr fatal;
  std::mutex fatal_mu;

  auto worker = [&](std::size_t w) {
    try {
      auto agent = factory();
      for (std::size_t i; !abort && (i = cursor++) < todo.size();) {
        const TaskCase& c = *todo[i];
        const auto request = make_request(c);
        std::optional<json> response;
        std::string failure;
        for (int attempt = 0;; ++attempt) {
          try {
            response = agent->call(request);
            failure.clear();
          } catch (const CaseFailure& e) {
            failure = e.what();
          }
          if (failure != "timeout" || attempt >= opt.max_retries) break;
        }
        slots[i] = score_case(c, failure.empty() ? response : std::nullopt, failure, ds.catalog, &confusion[w]);
      }
    } catch (...) {
      std::lock_guard lock(fatal_mu);
      if (!fatal) fatal = std::current_exception();
      abort = true;
    }
  };

  const auto n = std::min(opt.parallel, std::max<std::size_t>(todo.size(), 1));
  std::vector<std::thread> threads;
  for (std::size_t w = 1; w < n; ++w) threads.emplace_back(worker, w);
  worker(0);
  for (auto& t : threads) t.join();
  if (fatal) std::rethrow_exception(fatal);

  std::vector<diagnostics::CaseResult> results;
  for (auto& s : slots) results.push_back(std::move(*s));
  sandbox::ConfusionCounter merged;
  for (const auto& c : confusion) merged.merge(c);
  return finish(std::move(results), std::move(merged));
}

/// Scores recorded responses (one envelope per line) without an agent.
/// Cases without a response fail with "no response".
inline RunReport score_responses(const LoadedDataset& ds, const std::vector<json>& responses, const RunOptions& opt = {}) {
  std::map<std::string, json> by_id;
  for (const auto& r : responses)
    if (r.is_object() && r.contains("case_id") && r["case_id"].is_string()) by_id[r["case_id"].get<std::string>()] = r;
  std::vector<diagnostics::CaseResult> results;
  sandbox::ConfusionCounter confusion;
  for (const auto* c : select_cases(ds.cases, opt)) {
    const auto it = by_id.find(c->case_id);
    if (it == by_id.end()) results.push_back(score_case(*c, std::nullopt, "no response", ds.catalog));
    else results.push_back(score_case(*c, it->second, "", ds.catalog, &confusion));
  }
  return finish(std::move(results), std::move(confusion));
}

}  // namespace tripdiag::harness
