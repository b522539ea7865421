// Copyright 2026 the genie authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "genie/gridstore/table.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "genie/error.h"

namespace genie::gridstore {

namespace {

using qlang::TypeTag;

std::string trim(const std::string &s) {
  std::size_t b = 0, e = s.size();
  while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
  while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
  return s.substr(b, e - b);
}

std::string pk_key(const Value &v) { return std::to_string(v.index()) + ":" + value_text(v); }

[[noreturn]] void parse_error(std::size_t row, const std::string &why) {
  throw Error("ParseError", fmt::format("row {}: {}", row, why));
}

void check_point(const GeoPoint &p, std::size_t row) {
  if (!std::isfinite(p.lat) || p.lat < -90.0 || p.lat > 90.0) parse_error(row, "latitude out of range");
  if (!std::isfinite(p.lon) || p.lon < -180.0 || p.lon > 180.0) parse_error(row, "longitude out of range");
}

double parse_double(const std::string &s, std::size_t row, const std::string &col) {
  double v = 0.0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size() || !std::isfinite(v)) {
    parse_error(row, fmt::format("column {}: '{}' is not a number", col, s));
  }
  return v;
}

Value parse_cell(const ColumnSchema &c, const std::string &raw, std::size_t row) {
  std::string s = trim(raw);
  if (s.empty()) return std::monostate{};
  switch (c.type.tag) {
    case TypeTag::Integer: {
      std::int64_t v = 0;
      auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
      if (ec != std::errc() || p != s.data() + s.size()) {
        parse_error(row, fmt::format("column {}: '{}' is not an integer", c.name, s));
      }
      return v;
    }
    case TypeTag::Real:
      return parse_double(s, row, c.name);
    case TypeTag::Boolean: {
      if (s == "true" || s == "TRUE" || s == "1") return std::int64_t{1};
      if (s == "false" || s == "FALSE" || s == "0") return std::int64_t{0};
      parse_error(row, fmt::format("column {}: '{}' is not a boolean", c.name, s));
    }
    case TypeTag::Timestamp:
      try {
        return parse_timestamp(s);
      } catch (const Error &) {
        parse_error(row, fmt::format("column {}: invalid timestamp '{}'", c.name, s));
      }
    case TypeTag::Geometry: {
      // POINT(lon lat)
      std::string up = s;
      for (auto &ch : up) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
      if (up.rfind("POINT", 0) != 0) parse_error(row, fmt::format("column {}: expected POINT(lon lat)", c.name));
      auto open = s.find('('), close = s.find(')');
      if (open == std::string::npos || close == std::string::npos || close < open) {
        parse_error(row, fmt::format("column {}: malformed POINT", c.name));
      }
      std::istringstream in(s.substr(open + 1, close - open - 1));
      GeoPoint p;
      if (!(in >> p.lon >> p.lat)) parse_error(row, fmt::format("column {}: malformed POINT", c.name));
      check_point(p, row);
      return p;
    }
    case TypeTag::Varchar:
      if (c.type.length && static_cast<int>(s.size()) > *c.type.length) {
        parse_error(row, fmt::format("column {}: value longer than {}", c.name, *c.type.length));
      }
      return s;
    case TypeTag::Text:
      return s;
  }
  return std::monostate{};
}

bool type_accepts(TypeTag tag, const Value &v) {
  if (std::holds_alternative<std::monostate>(v)) return true;
  switch (tag) {
    case TypeTag::Integer:
    case TypeTag::Timestamp:
    case TypeTag::Boolean: return std::holds_alternative<std::int64_t>(v);
    case TypeTag::Real: return std::holds_alternative<double>(v) || std::holds_alternative<std::int64_t>(v);
    case TypeTag::Text:
    case TypeTag::Varchar: return std::holds_alternative<std::string>(v);
    case TypeTag::Geometry: return std::holds_alternative<GeoPoint>(v);
  }
  return false;
}

std::vector<std::vector<std::string>> csv_records(const std::string &text) {
  std::vector<std::vector<std::string>> out;
  std::vector<std::string> rec;
  std::string field;
  bool quoted = false, any = false;
  for (std::size_t k = 0; k < text.size(); ++k) {
    char c = text[k];
    if (quoted) {
      if (c == '"') {
        if (k + 1 < text.size() && text[k + 1] == '"') {
          field += '"';
          ++k;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    if (c == '"') {
      quoted = true;
      any = true;
    } else if (c == ',') {
      rec.push_back(std::move(field));
      field.clear();
      any = true;
    } else if (c == '\n') {
      if (any || !field.empty()) {
        rec.push_back(std::move(field));
        out.push_back(std::move(rec));
      }
      rec.clear();
      field.clear();
      any = false;
    } else if (c != '\r') {
      field += c;
    }
  }
  if (quoted) throw Error("ParseError", "unterminated quoted CSV field");
  if (any || !field.empty()) {
    rec.push_back(std::move(field));
    out.push_back(std::move(rec));
  }
  return out;
}

}  // namespace

std::string value_text(const Value &v) {
  struct V {
    std::string operator()(std::monostate) const { return ""; }
    std::string operator()(std::int64_t x) const { return std::to_string(x); }
    std::string operator()(double x) const { return fmt::format("{}", x); }
    std::string operator()(const std::string &s) const { return s; }
    std::string operator()(const GeoPoint &p) const { return fmt::format("POINT({} {})", p.lon, p.lat); }
  };
  return std::visit(V{}, v);
}

std::optional<double> value_number(const Value &v) {
  if (auto p = std::get_if<double>(&v)) return *p;
  if (auto p = std::get_if<std::int64_t>(&v)) return static_cast<double>(*p);
  return std::nullopt;
}

std::vector<std::string> split_csv_line(const std::string &line) {
  auto recs = csv_records(line);
  return recs.empty() ? std::vector<std::string>{} : recs.front();
}

StoredTable::StoredTable(std::string name, std::vector<ColumnSchema> columns)
    : name_(std::move(name)), columns_(std::move(columns)) {
  for (std::size_t c = 0; c < columns_.size(); ++c) {
    if (columns_[c].type.tag == TypeTag::Geometry && !geometry_column_) geometry_column_ = c;
  }
}

std::optional<std::size_t> StoredTable::column_index(const std::string &name) const {
  for (std::size_t c = 0; c < columns_.size(); ++c) {
    if (columns_[c].name == name) return c;
  }
  return std::nullopt;
}

void StoredTable::add_row(std::vector<Value> row) {
  if (row.size() != columns_.size()) {
    throw Error("SchemaMismatch", fmt::format("table {}: expected {} values, got {}", name_, columns_.size(), row.size()));
  }
  std::vector<std::string> keys;
  for (std::size_t c = 0; c < columns_.size(); ++c) {
    if (!type_accepts(columns_[c].type.tag, row[c])) {
      throw Error("SchemaMismatch", fmt::format("table {}: bad value for column {}", name_, columns_[c].name));
    }
    if (columns_[c].type.tag == TypeTag::Real) {
      if (auto p = std::get_if<std::int64_t>(&row[c])) row[c] = static_cast<double>(*p);
    }
    if (columns_[c].primary_key) {
      if (std::holds_alternative<std::monostate>(row[c])) {
        throw Error("SchemaMismatch", fmt::format("table {}: primary key {} is null", name_, columns_[c].name));
      }
      keys.push_back(columns_[c].name + "=" + pk_key(row[c]));
    }
  }
  for (const auto &k : keys) {
    if (keys_.count(k)) throw Error("DuplicateKey", fmt::format("table {}: duplicate key {}", name_, k));
  }
  keys_.insert(keys.begin(), keys.end());
  if (geometry_column_) {
    if (auto p = std::get_if<GeoPoint>(&row[*geometry_column_])) {
      index_.insert(rows_.size(), BBox{p->lat, p->lat, p->lon, p->lon});
    }
  }
  rows_.push_back(std::move(row));
}

void StoredTable::clear() {
  rows_.clear();
  keys_.clear();
  index_.clear();
}

std::vector<std::size_t> StoredTable::rows_in(const BBox &box) const {
  auto ids = index_.query(box);
  return std::vector<std::size_t>(ids.begin(), ids.end());
}

std::size_t ingest_csv_text(StoredTable &table, const std::string &text) {
  auto records = csv_records(text);
  if (records.empty()) throw Error("ParseError", "row 0: missing header");
  std::vector<std::string> header;
  for (auto &h : records[0]) header.push_back(trim(h));
  const auto &cols = table.columns();

  // For every table column: source CSV index, or a (lat, lon) index pair.
  struct Source {
    int idx = -1;
    int lat = -1;
    int lon = -1;
  };
  std::vector<Source> src(cols.size());
  std::vector<bool> used(header.size(), false);
  auto find = [&](const std::string &n) {
    for (std::size_t k = 0; k < header.size(); ++k) {
      if (header[k] == n) return static_cast<int>(k);
    }
    return -1;
  };
  for (std::size_t c = 0; c < cols.size(); ++c) {
    if (table.skip_columns.count(cols[c].name)) continue;
    src[c].idx = find(cols[c].name);
    if (src[c].idx < 0 && cols[c].type.tag == TypeTag::Geometry) {
      src[c].lat = find(cols[c].name + "_lat");
      src[c].lon = find(cols[c].name + "_lon");
      if (src[c].lat < 0 || src[c].lon < 0) {
        src[c].lat = find("lat");
        src[c].lon = find("lon");
      }
      if (src[c].lat >= 0 && src[c].lon >= 0) used[src[c].lat] = used[src[c].lon] = true;
    }
    if (src[c].idx >= 0) used[src[c].idx] = true;
  }
  for (std::size_t k = 0; k < header.size(); ++k) {
    if (!used[k]) {
      throw Error("SchemaMismatch", fmt::format("table {}: CSV column '{}' is not in the schema", table.name(), header[k]));
    }
  }
  std::size_t added = 0;
  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto &rec = records[r];
    if (rec.size() != header.size()) {
      parse_error(r, fmt::format("expected {} fields, got {}", header.size(), rec.size()));
    }
    std::vector<Value> row(cols.size());
    for (std::size_t c = 0; c < cols.size(); ++c) {
      if (src[c].idx >= 0) {
        row[c] = parse_cell(cols[c], rec[src[c].idx], r);
      } else if (src[c].lat >= 0) {
        GeoPoint p{parse_double(trim(rec[src[c].lat]), r, "lat"), parse_double(trim(rec[src[c].lon]), r, "lon")};
        check_point(p, r);
        row[c] = p;
      }
    }
    try {
      table.add_row(std::move(row));
    } catch (const Error &e) {
      throw Error(e.code(), fmt::format("row {}: {}", r, e.what()));
    }
    ++added;
  }
  return added;
}

namespace {

std::size_t ingest_geojson(StoredTable &table, const std::string &text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const std::exception &e) {
    throw Error("ParseError", fmt::format("row 0: {}", e.what()));
  }
  if (doc.value("type", "") != "FeatureCollection" || !doc.contains("features")) {
    throw Error("SchemaMismatch", "expected a GeoJSON FeatureCollection");
  }
  const auto &cols = table.columns();
  auto geom = table.geometry_column();
  std::size_t added = 0, r = 0;
  for (const auto &f : doc["features"]) {
    ++r;
    std::vector<Value> row(cols.size());
    const auto &props = f.contains("properties") && f["properties"].is_object() ? f["properties"] : nlohmann::json::object();
    for (auto it = props.begin(); it != props.end(); ++it) {
      if (!table.column_index(it.key())) {
        throw Error("SchemaMismatch", fmt::format("table {}: property '{}' is not in the schema", table.name(), it.key()));
      }
    }
    for (std::size_t c = 0; c < cols.size(); ++c) {
      if (table.skip_columns.count(cols[c].name) || !props.contains(cols[c].name)) continue;
      const auto &v = props[cols[c].name];
      std::string raw = v.is_string() ? v.get<std::string>() : v.dump();
      if (v.is_null()) raw.clear();
      row[c] = parse_cell(cols[c], raw, r);
    }
    if (geom) {
      const auto &g = f.contains("geometry") ? f["geometry"] : nlohmann::json();
      if (!g.is_object() || g.value("type", "") != "Point" || !g.contains("coordinates") ||
          !g["coordinates"].is_array() || g["coordinates"].size() < 2 || !g["coordinates"][0].is_number() ||
          !g["coordinates"][1].is_number()) {
        parse_error(r, "feature geometry must be a Point");
      }
      GeoPoint p{g["coordinates"][1].get<double>(), g["coordinates"][0].get<double>()};
      check_point(p, r);
      row[*geom] = p;
    }
    try {
      table.add_row(std::move(row));
    } catch (const Error &e) {
      throw Error(e.code(), fmt::format("row {}: {}", r, e.what()));
    }
    ++added;
  }
  return added;
}

}  // namespace

std::size_t ingest_file(StoredTable &table, const std::filesystem::path &file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw Error("IOError", fmt::format("cannot open {}", file.string()));
  std::stringstream ss;
  ss << in.rdbuf();
  auto ext = file.extension().string();
  if (ext == ".json" || ext == ".geojson") return ingest_geojson(table, ss.str());
  return ingest_csv_text(table, ss.str());
}

}  // namespace genie::gridstore
