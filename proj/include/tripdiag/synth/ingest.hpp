// SPDX-License-Identifier: Apache-2.0
#pragma once

// Converts benchmark-shaped CSV exports (TravelPlanner / TripCraft column
// layouts) into catalog records. Headers are matched case-insensitively
// with spaces and underscores ignored; records without an id column get
// sequential ids per kind.

#include <cmath>
#include <istream>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "tripdiag/core/serialize.hpp"
#include "tripdiag/sandbox/normalize.hpp"

namespace tripdiag::synth {

/// RFC 4180 rows: quoted fields may hold commas, doubled quotes and newlines.
inline std::vector<std::vector<std::string>> read_csv(std::istream& in) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false, any = false;
  char c;
  while (in.get(c)) {
    any = true;
    if (quoted) {
      if (c == '"') {
        if (in.peek() == '"') {
          field += '"';
          in.get();
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      row.push_back(std::move(field));
      field.clear();
    } else if (c == '\n' || c == '\r') {
      if (c == '\r' && in.peek() == '\n') in.get();
      row.push_back(std::move(field));
      field.clear();
      rows.push_back(std::move(row));
      row.clear();
      any = false;
    } else {
      field += c;
    }
  }
  if (quoted) throw DataError("unterminated quoted CSV field");
  if (any) {
    row.push_back(std::move(field));
    rows.push_back(std::move(row));
  }
  return rows;
}

namespace detail {

inline std::string header_key(std::string_view h) {
  std::string out;
  for (char c : h)
    if (c != ' ' && c != '_' && c != '-') out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

class Row {
public:
  Row(const std::map<std::string, std::size_t>& cols, const std::vector<std::string>& cells, std::string where)
      : cols_(cols), cells_(cells), where_(std::move(where)) {}

  std::optional<std::string> get(std::initializer_list<const char*> names) const {
    for (const auto* n : names)
      if (auto it = cols_.find(header_key(n)); it != cols_.end() && it->second < cells_.size()) {
        std::string v = cells_[it->second];
        while (!v.empty() && std::isspace(static_cast<unsigned char>(v.back()))) v.pop_back();
        std::size_t i = 0;
        while (i < v.size() && std::isspace(static_cast<unsigned char>(v[i]))) ++i;
        v.erase(0, i);
        if (!v.empty() && v != "NaN" && v != "nan" && v != "-") return v;
      }
    return std::nullopt;
  }

  std::string need(std::initializer_list<const char*> names) const {
    if (auto v = get(names)) return *v;
    throw DataError(where_ + ": missing column '" + *names.begin() + "'");
  }

  Money money(std::initializer_list<const char*> names) const {
    const auto v = get(names);
    if (!v) return 0;
    std::string digits;
    for (char c : *v)
      if (std::isdigit(static_cast<unsigned char>(c)) || c == '.' || c == '-') digits += c;
    try {
      const double d = std::stod(digits);
      if (d < 0) throw DataError(where_ + ": negative price");
      return static_cast<Money>(std::llround(d * 100));
    } catch (const std::logic_error&) {
      throw DataError(where_ + ": bad price '" + *v + "'");
    }
  }

  std::optional<Fixed1> rating(std::initializer_list<const char*> names) const {
    const auto v = get(names);
    if (!v) return std::nullopt;
    try {
      const double d = std::stod(*v);
      if (d < 0 || d > 5) throw DataError(where_ + ": rating out of range");
      return Fixed1{static_cast<int>(std::lround(d * 10))};
    } catch (const std::logic_error&) {
      throw DataError(where_ + ": bad rating '" + *v + "'");
    }
  }

  std::optional<int> integer(std::initializer_list<const char*> names) const {
    const auto v = get(names);
    if (!v) return std::nullopt;
    try {
      return static_cast<int>(std::lround(std::stod(*v)));
    } catch (const std::logic_error&) {
      throw DataError(where_ + ": bad number '" + *v + "'");
    }
  }

  const std::string& where() const { return where_; }

private:
  const std::map<std::string, std::size_t>& cols_;
  const std::vector<std::string>& cells_;
  std::string where_;
};

inline std::vector<std::string> split_tags(const std::string& text, std::string_view seps) {
  std::vector<std::string> out;
  std::string cur;
  auto flush = [&] {
    auto t = sandbox::fold_text(cur);
    if (!t.empty()) out.push_back(t);
    cur.clear();
  };
  for (char c : text) {
    if (seps.find(c) != std::string_view::npos) flush();
    else cur += c;
  }
  flush();
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// "2 hours 5 minutes", "1h 20m" or a bare minute count.
inline std::optional<int> duration_minutes(const std::string& text) {
  int total = 0, num = -1;
  bool any = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      num = (num < 0 ? 0 : num * 10) + (c - '0');
    } else if (std::isalpha(static_cast<unsigned char>(c)) && num >= 0) {
      total += std::tolower(static_cast<unsigned char>(c)) == 'h' ? num * 60 : num;
      num = -1;
      any = true;
      while (i + 1 < text.size() && std::isalpha(static_cast<unsigned char>(text[i + 1]))) ++i;
    }
  }
  if (num >= 0) {
    total += num;
    any = true;
  }
  return any ? std::optional<int>(total) : std::nullopt;
}

inline std::string serial(const char* prefix, std::size_t n) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s-%05zu", prefix, n);
  return buf;
}

}  // namespace detail

/// Records of one kind from a CSV stream. `source` labels error messages.
inline std::vector<PoiRecord> ingest_csv(PoiKind kind, std::istream& in, const std::string& source) {
  const auto rows = read_csv(in);
  if (rows.empty()) return {};
  std::map<std::string, std::size_t> cols;
  for (std::size_t i = 0; i < rows[0].size(); ++i) {
    std::string h = rows[0][i];
    if (i == 0 && h.rfind("\xEF\xBB\xBF", 0) == 0) h.erase(0, 3);
    cols.emplace(detail::header_key(h), i);
  }
  std::vector<PoiRecord> out;
  for (std::size_t n = 1; n < rows.size(); ++n) {
    const auto& cells = rows[n];
    if (cells.size() == 1 && cells[0].empty()) continue;
    const detail::Row row(cols, cells, source + ":" + std::to_string(n + 1));
    PoiRecord r;
    r.kind = kind;
    switch (kind) {
      case PoiKind::flight: {
        r.id = row.get({"id", "Flight Number"}).value_or(detail::serial("fl", n));
        r.origin = row.need({"OriginCityName", "origin"});
        r.destination = row.need({"DestCityName", "destination"});
        r.city = r.origin;
        r.name = "Flight " + r.id;
        r.price = row.money({"Price"});
        const auto date = Date::parse(row.need({"FlightDate", "date"}));
        r.depart = Timestamp{date, parse_clock(row.need({"DepTime", "depart"}))};
        int arrive = parse_clock(row.need({"ArrTime", "arrive"}));
        if (arrive < r.depart->minute) arrive += 24 * 60;
        r.arrive = Timestamp{date, arrive};
        r.duration_min = row.get({"ActualElapsedTime", "duration"}) ? detail::duration_minutes(*row.get({"ActualElapsedTime", "duration"}))
                                                                      : std::optional<int>(arrive - r.depart->minute);
        break;
      }
      case PoiKind::accommodation:
        r.id = row.get({"id"}).value_or(detail::serial("ac", n));
        r.name = row.need({"NAME", "name"});
        r.city = row.need({"city"});
        r.price = row.money({"price", "pricing"});
        r.room_type = sandbox::fold_text(row.need({"room type", "roomtype"}));
        r.house_rules = detail::split_tags(row.get({"house_rules", "house rules"}).value_or(""), "&,;");
        r.max_occupancy = row.integer({"maximum occupancy", "max_occupancy"});
        r.rating = row.rating({"review rate number", "rating"});
        break;
      case PoiKind::restaurant:
        r.id = row.get({"id"}).value_or(detail::serial("re", n));
        r.name = row.need({"Name"});
        r.city = row.need({"City"});
        r.price = row.money({"Average Cost", "avg cost", "price"});
        r.cuisines = detail::split_tags(row.get({"Cuisines", "cuisine"}).value_or(""), ",;");
        r.rating = row.rating({"Aggregate Rating", "rating"});
        break;
      case PoiKind::attraction:
        r.id = row.get({"id"}).value_or(detail::serial("at", n));
        r.name = row.need({"Name"});
        r.city = row.need({"City"});
        r.price = row.money({"price", "ticket"});
        r.rating = row.rating({"rating"});
        if (auto lat = row.get({"Latitude"}), lon = row.get({"Longitude"}); lat && lon) {
          // Equirectangular projection to metres, adequate inside one city.
          r.y_m = static_cast<int>(std::lround(std::stod(*lat) * 111320.0));
          r.x_m = static_cast<int>(std::lround(std::stod(*lon) * 111320.0 * std::cos(std::stod(*lat) * std::numbers::pi / 180)));
        }
        break;
      case PoiKind::event:
        r.id = row.get({"id"}).value_or(detail::serial("ev", n));
        r.name = row.need({"name", "title"});
        r.city = row.need({"city"});
        r.price = row.money({"price"});
        if (auto d = row.get({"date", "dateTitle", "event_date"})) r.event_date = Date::parse(d->substr(0, 10));
        break;
      case PoiKind::intercity_transit:
      case PoiKind::innercity_transit:
        r.id = row.get({"id"}).value_or(detail::serial(kind == PoiKind::intercity_transit ? "tr" : "lc", n));
        r.origin = row.need({"origin", "from"});
        r.destination = row.need({"destination", "to"});
        r.city = kind == PoiKind::innercity_transit ? row.need({"city"}) : r.origin;
        r.mode = sandbox::fold_text(row.need({"mode", "type"}));
        r.name = row.get({"name"}).value_or(r.mode + " " + r.origin + " to " + r.destination);
        r.price = row.money({"price", "cost"});
        r.duration_min = row.integer({"duration", "duration_min"});
        r.from_poi = row.get({"from_poi"}).value_or("");
        r.to_poi = row.get({"to_poi"}).value_or("");
        if (auto d = row.get({"depart"})) {
          r.depart = Timestamp::parse(*d);
          if (r.duration_min) r.arrive = Timestamp{r.depart->date, r.depart->minute + *r.duration_min};
        }
        break;
    }
    try {
      check_record(r);
    } catch (const DataError& e) {
      throw DataError(row.where() + ": " + e.what());
    }
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace tripdiag::synth
