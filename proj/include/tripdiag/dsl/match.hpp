// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "tripdiag/core/ratio.hpp"
#include "tripdiag/dsl/canonicalize.hpp"

namespace tripdiag {

/// Outcome of pairing predicted items with gold items.
///
/// tp counts predictions that matched some gold item (several predictions may
/// match the same gold); fn counts gold items no prediction matched.
struct MatchReport {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t pred_count = 0;
  std::size_t gold_count = 0;
  std::size_t matched_gold = 0;  // distinct gold indices hit
  Ratio precision;
  Ratio recall;
  Ratio f1;
  bool exact_match = false;
  std::vector<std::optional<std::size_t>> pairing;  // pred index -> gold index
};

/// Greedy pairing: each prediction, in input order, takes the lowest-index
/// gold item `eq` accepts. Empty denominators yield 1 when both sides are
/// empty and 0 otherwise.
template <class Eq>
MatchReport match_by(std::size_t pred_count, std::size_t gold_count, Eq eq) {
  MatchReport r;
  r.pred_count = pred_count;
  r.gold_count = gold_count;
  std::set<std::size_t> hit;
  for (std::size_t p = 0; p < pred_count; ++p) {
    std::optional<std::size_t> match;
    for (std::size_t g = 0; g < gold_count; ++g)
      if (eq(p, g)) {
        match = g;
        break;
      }
    if (match) {
      ++r.tp;
      hit.insert(*match);
    } else {
      ++r.fp;
    }
    r.pairing.push_back(match);
  }
  r.matched_gold = hit.size();
  r.fn = gold_count - hit.size();
  const bool both_empty = pred_count == 0 && gold_count == 0;
  const auto ratio = [&](std::size_t num, std::size_t den) {
    return den == 0 ? Ratio(both_empty ? 1 : 0, 1) : Ratio(static_cast<std::int64_t>(num), static_cast<std::int64_t>(den));
  };
  r.precision = ratio(r.tp, pred_count);
  r.recall = ratio(r.matched_gold, gold_count);
  r.f1 = harmonic_f1(r.precision, r.recall);
  r.exact_match = r.fp == 0 && r.fn == 0;
  return r;
}

/// Key matching; an empty key never matches.
inline MatchReport match_keys(const std::vector<std::optional<std::string>>& pred,
                              const std::vector<std::string>& gold) {
  return match_by(pred.size(), gold.size(), [&](std::size_t p, std::size_t g) { return pred[p] && *pred[p] == gold[g]; });
}

/// Constraint-set matching under canonical equivalence.
inline MatchReport match_sets(const std::vector<dsl::Expr>& pred, const std::vector<dsl::Expr>& gold) {
  std::vector<std::optional<std::string>> pk;
  std::vector<std::string> gk;
  for (const auto& p : pred) pk.push_back(dsl::canonical_text(p));
  for (const auto& g : gold) gk.push_back(dsl::canonical_text(g));
  return match_keys(pk, gk);
}

/// As match_sets, on raw text. Predictions that fail to parse or type-check
/// count as false positives; gold text must be valid.
inline MatchReport match_texts(const std::vector<std::string>& pred, const std::vector<std::string>& gold) {
  std::vector<std::optional<std::string>> pk;
  std::vector<std::string> gk;
  for (const auto& p : pred) {
    try {
      pk.push_back(dsl::canonical_text(dsl::parse(p)));
    } catch (const Error&) {
      pk.push_back(std::nullopt);
    }
  }
  for (const auto& g : gold) gk.push_back(dsl::canonical_text(dsl::parse(g)));
  return match_keys(pk, gk);
}

}  // namespace tripdiag
