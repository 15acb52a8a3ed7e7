// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "tripdiag/core/serialize.hpp"

namespace tripdiag {

/// Immutable store of catalog records, indexed by id and by (kind, city).
class PoiCatalog {
public:
  PoiCatalog() = default;

  explicit PoiCatalog(std::vector<PoiRecord> records) : records_(std::move(records)) {
    std::sort(records_.begin(), records_.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
    for (std::size_t i = 0; i < records_.size(); ++i) {
      const auto& r = records_[i];
      check_record(r);
      if (!by_id_.emplace(r.id, i).second) throw DataError("duplicate record id " + r.id);
      by_kind_city_[{r.kind, r.city}].push_back(&records_[i]);
      if (!r.city.empty()) cities_.insert(r.city);
      if (is_intercity_leg(r.kind)) {
        cities_.insert(r.origin);
        cities_.insert(r.destination);
      }
    }
  }

  // Index pointers refer into records_, so copies must rebuild them.
  PoiCatalog(const PoiCatalog& other) : PoiCatalog(other.records_) {}
  PoiCatalog& operator=(const PoiCatalog& other) {
    if (this != &other) *this = PoiCatalog(other.records_);
    return *this;
  }
  PoiCatalog(PoiCatalog&&) = default;
  PoiCatalog& operator=(PoiCatalog&&) = default;

  const std::vector<PoiRecord>& records() const { return records_; }
  std::size_t size() const { return records_.size(); }

  const PoiRecord* find(const std::string& id) const {
    auto it = by_id_.find(id);
    return it == by_id_.end() ? nullptr : &records_[it->second];
  }

  /// Resolves an id whose record must also have the expected kind.
  const PoiRecord* resolve(const std::string& id, PoiKind kind) const {
    const auto* r = find(id);
    return (r && r->kind == kind) ? r : nullptr;
  }

  /// First record (in id order) whose id or name equals `ref`.
  const PoiRecord* find_by_ref(const std::string& ref) const {
    if (const auto* r = find(ref)) return r;
    for (const auto& r : records_)
      if (r.name == ref) return &r;
    return nullptr;
  }

  /// Records of a kind located in a city, in id order.
  const std::vector<const PoiRecord*>& in_city(PoiKind kind, const std::string& city) const {
    static const std::vector<const PoiRecord*> empty;
    auto it = by_kind_city_.find({kind, city});
    return it == by_kind_city_.end() ? empty : it->second;
  }

  bool has_city(const std::string& city) const { return cities_.count(city) > 0; }
  const std::set<std::string>& cities() const { return cities_; }

private:
  std::vector<PoiRecord> records_;
  std::unordered_map<std::string, std::size_t> by_id_;
  std::map<std::pair<PoiKind, std::string>, std::vector<const PoiRecord*>> by_kind_city_;
  std::set<std::string> cities_;
};

// ---- JSON-lines files ----------------------------------------------------------

inline std::vector<json> read_json_lines(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  std::vector<json> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(json::parse(line));
    } catch (const json::exception& e) {
      throw DataError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

inline json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

inline void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out << text;
}

/// One `<kind>.jsonl` file per record kind.
inline PoiCatalog load_catalog(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw DataError("catalog directory not found: " + dir.string());
  std::vector<PoiRecord> records;
  for (auto kind : kAllPoiKinds) {
    const auto path = dir / (std::string(to_string(kind)) + ".jsonl");
    if (!std::filesystem::exists(path)) continue;
    for (const auto& j : read_json_lines(path)) {
      auto r = poi_record_from_json(j);
      if (r.kind != kind) throw DataError(path.string() + ": record " + r.id + " has kind " + std::string(to_string(r.kind)));
      records.push_back(std::move(r));
    }
  }
  return PoiCatalog(std::move(records));
}

inline std::string catalog_file_text(const PoiCatalog& catalog, PoiKind kind) {
  std::string text;
  for (const auto& r : catalog.records())
    if (r.kind == kind) text += to_json(r).dump() + "\n";
  return text;
}

inline void save_catalog(const PoiCatalog& catalog, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  for (auto kind : kAllPoiKinds) write_text_file(dir / (std::string(to_string(kind)) + ".jsonl"), catalog_file_text(catalog, kind));
}

}  // namespace tripdiag
