// SPDX-License-Identifier: Apache-2.0
#pragma once

// Oracle plan construction.
//
// Feasibility: find a plan on which every constraint holds. Violation: find
// a plan on which each constraint of a chosen subset fails while all others
// hold; this is the feasibility problem for rest + {negate(c)}.
//
// The default backend is an exact depth-first search over day skeletons and
// slots (see slots.hpp) with three-valued pruning. A MILP backend would
// encode one binary per (slot, candidate) with an assignment row per slot,
// cost rows for the linear accessors and indicator rows for set membership;
// it plugs in through SolverBackend.

#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "tripdiag/solver/partial.hpp"
#include "tripdiag/solver/verify.hpp"

namespace tripdiag::solver {

struct SolveRequest {
  Query query;
  std::vector<dsl::Expr> constraints;
  std::vector<std::size_t> neg_subset;
  std::uint64_t search_budget = 200000;
  std::uint64_t seed = 0;
  std::optional<SlotPolicy> policy;  // profile default when empty

  SlotPolicy effective_policy() const { return policy.value_or(default_policy(query.profile)); }
};

enum class SolveStatus : std::uint8_t { feasible, infeasible, budget_exhausted };

inline constexpr auto kSolveStatusNames =
    make_names(std::pair{SolveStatus::feasible, "feasible"}, std::pair{SolveStatus::infeasible, "infeasible"},
               std::pair{SolveStatus::budget_exhausted, "budget_exhausted"});

inline std::string_view to_string(SolveStatus s) { return kSolveStatusNames.name(s); }

/// Describes the exhausted space behind an infeasible verdict.
struct InfeasibilityCertificate {
  std::size_t skeletons = 0;             // day skeletons considered
  std::size_t skeletons_empty_slot = 0;  // of which had a slot without candidates
  std::uint64_t nodes = 0;
  std::string reason;
};

struct SolveOutcome {
  SolveStatus status = SolveStatus::infeasible;
  std::optional<Itinerary> plan;
  std::uint64_t nodes_explored = 0;
  std::optional<InfeasibilityCertificate> certificate;
};

/// The constraint set a violation request must satisfy.
inline std::vector<dsl::Expr> required_constraints(const std::vector<dsl::Expr>& constraints,
                                                   const std::vector<std::size_t>& neg_subset) {
  std::vector<dsl::Expr> out;
  for (std::size_t i = 0; i < constraints.size(); ++i) {
    const bool negated = std::find(neg_subset.begin(), neg_subset.end(), i) != neg_subset.end();
    out.push_back(negated ? dsl::negate(constraints[i]) : constraints[i]);
  }
  return out;
}

inline void check_request(const SolveRequest& req) {
  if (req.search_budget == 0) throw UsageError("search budget must be positive");
  std::vector<std::size_t> seen;
  for (auto i : req.neg_subset) {
    if (i >= req.constraints.size()) throw UsageError("violation index " + std::to_string(i) + " out of range");
    if (std::find(seen.begin(), seen.end(), i) != seen.end()) throw UsageError("duplicate violation index " + std::to_string(i));
    seen.push_back(i);
  }
  if (req.query.dates.empty() || req.query.destinations.empty()) throw UsageError("query needs dates and destinations");
}

class SolverBackend {
public:
  virtual ~SolverBackend() = default;
  virtual std::string_view name() const = 0;
  virtual SolveOutcome solve(const SolveRequest& req, const PoiCatalog& catalog, std::ostream* trace) const = 0;
};

class SearchBackend final : public SolverBackend {
public:
  std::string_view name() const override { return "search"; }

  SolveOutcome solve(const SolveRequest& req, const PoiCatalog& catalog, std::ostream* trace) const override {
    check_request(req);
    const auto required = required_constraints(req.constraints, req.neg_subset);
    const auto policy = req.effective_policy();
    SolveOutcome out;
    InfeasibilityCertificate cert;
    bool exhausted = false;
    for (const auto& sk : day_skeletons(req.query.dates.size(), req.query.destinations.size())) {
      ++cert.skeletons;
      const auto slots = build_slots(req.query, sk, catalog, policy, req.seed);
      if (std::any_of(slots.begin(), slots.end(), [](const Slot& s) { return s.candidates.empty(); })) {
        ++cert.skeletons_empty_slot;
        continue;
      }
      Search s(req, catalog, slots, required, trace, out.nodes_explored);
      const auto r = s.run();
      out.nodes_explored = s.nodes;
      if (r == Search::Result::found) {
        out.status = SolveStatus::feasible;
        out.plan = std::move(s.plan);
        return out;
      }
      if (r == Search::Result::budget) {
        exhausted = true;
        break;
      }
    }
    if (exhausted) {
      out.status = SolveStatus::budget_exhausted;
      return out;
    }
    cert.nodes = out.nodes_explored;
    if (cert.skeletons == 0) cert.reason = "fewer days than destinations";
    else if (cert.skeletons == cert.skeletons_empty_slot) cert.reason = "every day skeleton has a slot without candidates";
    else cert.reason = "search space exhausted";
    out.status = SolveStatus::infeasible;
    out.certificate = cert;
    return out;
  }

private:
  struct Search {
    enum class Result : std::uint8_t { found, exhausted, budget };

    Search(const SolveRequest& r, const PoiCatalog& c, const std::vector<Slot>& s, const std::vector<dsl::Expr>& req_c,
           std::ostream* t, std::uint64_t n)
        : req(r), catalog(c), slots(s), required(req_c), trace(t), nodes(n) {}

    const SolveRequest& req;
    const PoiCatalog& catalog;
    const std::vector<Slot>& slots;
    const std::vector<dsl::Expr>& required;
    std::ostream* trace;
    std::uint64_t nodes;

    PartialEvaluator partial{req.query, catalog, slots};
    std::vector<const PoiRecord*> chosen = std::vector<const PoiRecord*>(slots.size(), nullptr);
    std::optional<Itinerary> plan;

    Tri status(std::size_t assigned) {
      Tri t = Tri::yes;
      for (const auto& c : required) {
        t = tri_and(t, partial.eval(c, chosen, assigned));
        if (t == Tri::no) break;
      }
      return t;
    }

    void log(std::size_t slot, const PoiRecord& r, std::string_view verdict) {
      if (!trace) return;
      *trace << json{{"node", nodes}, {"slot", slot}, {"day", slots[slot].day}, {"decision", r.id}, {"verdict", verdict}}.dump()
             << "\n";
    }

    Result run() {
      if (status(0) == Tri::no) return Result::exhausted;
      return descend(0);
    }

    Result descend(std::size_t i) {
      if (i == slots.size()) {
        Itinerary p = assemble(req.query, slots, chosen, req.query.people);
        if (!verify(p, required, catalog, req.query).empty()) return Result::exhausted;
        plan = std::move(p);
        return Result::found;
      }
      for (const PoiRecord* r : slots[i].candidates) {
        if (nodes >= req.search_budget) return Result::budget;
        ++nodes;
        if (!admissible(slots, chosen, i, *r)) {
          log(i, *r, "inadmissible");
          continue;
        }
        chosen[i] = r;
        if (status(i + 1) == Tri::no) {
          log(i, *r, "pruned");
          continue;
        }
        log(i, *r, "descend");
        const auto res = descend(i + 1);
        if (res != Result::exhausted) return res;
      }
      chosen[i] = nullptr;
      return Result::exhausted;
    }
  };
};

inline SolveOutcome solve(const SolveRequest& req, const PoiCatalog& catalog, std::ostream* trace = nullptr) {
  return SearchBackend().solve(req, catalog, trace);
}

inline json to_json(const SolveOutcome& o) {
  json j{{"status", to_string(o.status)}, {"nodes_explored", o.nodes_explored}};
  if (o.plan) j["plan"] = to_json(*o.plan);
  if (o.certificate)
    j["certificate"] = json{{"skeletons", o.certificate->skeletons},
                            {"skeletons_with_empty_slot", o.certificate->skeletons_empty_slot},
                            {"nodes", o.certificate->nodes},
                            {"reason", o.certificate->reason}};
  return j;
}

}  // namespace tripdiag::solver
