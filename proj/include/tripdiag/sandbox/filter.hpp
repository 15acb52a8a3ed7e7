// SPDX-License-Identifier: Apache-2.0
#pragma once

// Single-field filter predicates such as `lambda x: x <= 400`.
//
// The body is parsed with the constraint grammar, `x` bound to the selected
// field. Prices are written in major currency units and may carry one
// decimal; they are rescaled to minor units after parsing.

#include <string>
#include <string_view>

#include "tripdiag/dsl/canonicalize.hpp"
#include "tripdiag/dsl/evaluate.hpp"
#include "tripdiag/sandbox/normalize.hpp"

namespace tripdiag::sandbox {

struct FilterPredicate {
  dsl::ItemField field = dsl::ItemField::price;
  dsl::Expr body;  // predicate over item.<field>

  bool accepts(const PoiRecord& r) const { return dsl::evaluate_item(body, &r); }
  std::string canonical() const { return dsl::canonical_text(body); }
};

/// Maps a filter key to the record field it reads. Throws UsageError.
inline dsl::ItemField filter_field(std::string_view key) {
  const auto k = normalize_tool_name(key);
  if (k == "price" || k == "cost" || k == "avgcost" || k == "averagecost") return dsl::ItemField::price;
  if (k == "rating" || k == "score") return dsl::ItemField::rating;
  if (k == "name") return dsl::ItemField::name;
  if (k == "cuisine" || k == "cuisines") return dsl::ItemField::cuisines;
  if (k == "roomtype" || k == "type") return dsl::ItemField::room_type;
  if (k == "houserules" || k == "houserule") return dsl::ItemField::house_rules;
  if (k == "maxoccupancy" || k == "capacity") return dsl::ItemField::max_occupancy;
  throw UsageError("unsupported filter key '" + std::string(key) + "'");
}

namespace detail {

// Price filters are parsed as one-decimal numbers in major units and then
// rewritten onto the integer minor-unit price field.
inline dsl::Expr rescale_price(dsl::Expr e) {
  using namespace dsl;
  if (e.kind == NodeKind::item_field && e.field == ItemField::rating) return item_field(ItemField::price);
  if (e.kind == NodeKind::literal)
    if (const auto* f = std::get_if<Fixed1>(&e.value)) return int_lit(f->tenths * 10);
  for (auto& c : e.children) c = rescale_price(std::move(c));
  return e;
}

}  // namespace detail

/// Parses `lambda x: <body>` (the `lambda x:` prefix is optional). Throws
/// UsageError for anything that is not a single-field predicate.
inline FilterPredicate parse_filter(std::string_view key, std::string_view text) {
  FilterPredicate out;
  out.field = filter_field(key);
  std::string_view body = text;
  std::string var = "x";
  while (!body.empty() && std::isspace(static_cast<unsigned char>(body.front()))) body.remove_prefix(1);
  if (body.starts_with("lambda")) {
    const auto colon = body.find(':');
    if (colon == std::string_view::npos) throw UsageError("malformed filter '" + std::string(text) + "'");
    var = fold_text(body.substr(6, colon - 6));
    if (var.empty() || var.find(' ') != std::string::npos) throw UsageError("malformed filter '" + std::string(text) + "'");
    body = body.substr(colon + 1);
  }
  const bool price = out.field == dsl::ItemField::price;
  dsl::ParseOptions opts;
  opts.variable = std::pair{var, price ? dsl::ItemField::rating : out.field};
  opts.item_syntax = false;
  std::string src(body);
  if (fold_text(src) == "true" || fold_text(src) == "false") src = fold_text(src);
  try {
    dsl::Expr e = dsl::parse(src, opts);
    out.body = price ? dsl::renormalize(detail::rescale_price(std::move(e))) : std::move(e);
  } catch (const Error& err) {
    throw UsageError("malformed filter '" + std::string(text) + "': " + err.what());
  }
  return out;
}

}  // namespace tripdiag::sandbox
