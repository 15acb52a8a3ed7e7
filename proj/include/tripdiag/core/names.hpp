// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "tripdiag/core/error.hpp"

namespace tripdiag {

/// Bidirectional enum <-> string table.
template <class E, std::size_t N>
struct NameTable {
  std::array<std::pair<E, std::string_view>, N> entries;

  constexpr std::string_view name(E value) const {
    for (const auto& [e, n] : entries)
      if (e == value) return n;
    return "?";
  }

  constexpr std::optional<E> find(std::string_view text) const {
    for (const auto& [e, n] : entries)
      if (n == text) return e;
    return std::nullopt;
  }

  E parse(std::string_view text, std::string_view what) const {
    if (auto e = find(text)) return *e;
    throw DataError("unknown " + std::string(what) + " '" + std::string(text) + "'");
  }
};

template <class E, class... S>
constexpr auto make_names(std::pair<E, S>... entries) {
  return NameTable<E, sizeof...(S)>{{{std::pair<E, std::string_view>(entries.first, entries.second)...}}};
}

}  // namespace tripdiag
