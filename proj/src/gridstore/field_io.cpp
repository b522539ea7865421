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

#include "genie/gridstore/field_io.h"

#include <bit>
#include <cstring>
#include <fstream>

#include <fmt/format.h>

#include "genie/error.h"

namespace genie::gridstore {

namespace {

static_assert(std::endian::native == std::endian::little, "field encoding assumes a little-endian host");

template <typename T>
void put(std::ostream &out, T v) {
  char buf[sizeof(T)];
  std::memcpy(buf, &v, sizeof(T));
  out.write(buf, sizeof(T));
}

void put_str(std::ostream &out, const std::string &s) {
  put<std::uint32_t>(out, static_cast<std::uint32_t>(s.size()));
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

[[noreturn]] void corrupt(const std::string &why) { throw Error("CorruptField", why); }

template <typename T>
T get(std::istream &in) {
  char buf[sizeof(T)];
  if (!in.read(buf, sizeof(T))) corrupt("truncated header");
  T v;
  std::memcpy(&v, buf, sizeof(T));
  return v;
}

std::string get_str(std::istream &in) {
  auto n = get<std::uint32_t>(in);
  if (n > (1u << 20)) corrupt("string too long");
  std::string s(n, '\0');
  if (n && !in.read(s.data(), n)) corrupt("truncated string");
  return s;
}

}  // namespace

void write_field(std::ostream &out, const GridField &f, const Domain &domain) {
  out.write(kFieldMagic, 4);
  put<std::uint32_t>(out, kFieldVersion);
  put_str(out, f.attribute.table);
  put_str(out, f.attribute.column);
  put_str(out, f.param_signature);
  put<std::uint8_t>(out, static_cast<std::uint8_t>(f.value_kind));
  BBox b = domain.to_bbox(f.extent.rect);
  put<double>(out, b.lat_min);
  put<double>(out, b.lat_max);
  put<double>(out, b.lon_min);
  put<double>(out, b.lon_max);
  put<std::int64_t>(out, domain.abs(f.extent.t0));
  put<std::int64_t>(out, domain.abs(f.extent.t1));
  put<double>(out, quanta_degrees(f.sres));
  put<double>(out, seconds_hours(f.tres));
  put<std::int32_t>(out, f.extent.rect.i0);
  put<std::int32_t>(out, f.extent.rect.i1);
  put<std::int32_t>(out, f.extent.rect.j0);
  put<std::int32_t>(out, f.extent.rect.j1);
  put<std::int64_t>(out, f.extent.t0);
  put<std::int64_t>(out, f.extent.t1);
  put<std::int32_t>(out, f.sres);
  put<std::int32_t>(out, static_cast<std::int32_t>(f.tres));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(f.nt()));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(f.ni()));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(f.nj()));
  std::vector<float> buf(f.values.begin(), f.values.end());
  out.write(reinterpret_cast<const char *>(buf.data()), static_cast<std::streamsize>(buf.size() * sizeof(float)));
  if (!out) throw Error("IOError", "failed to write field");
}

GridField read_field(std::istream &in) {
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, kFieldMagic, 4) != 0) corrupt("bad magic");
  if (get<std::uint32_t>(in) != kFieldVersion) corrupt("unsupported version");
  GridField f;
  f.attribute.table = get_str(in);
  f.attribute.column = get_str(in);
  f.param_signature = get_str(in);
  auto kind = get<std::uint8_t>(in);
  if (kind > 1) corrupt("bad value kind");
  f.value_kind = static_cast<ValueKind>(kind);
  for (int k = 0; k < 4; ++k) get<double>(in);
  get<std::int64_t>(in);
  get<std::int64_t>(in);
  get<double>(in);
  get<double>(in);
  f.extent.rect.i0 = get<std::int32_t>(in);
  f.extent.rect.i1 = get<std::int32_t>(in);
  f.extent.rect.j0 = get<std::int32_t>(in);
  f.extent.rect.j1 = get<std::int32_t>(in);
  f.extent.t0 = get<std::int64_t>(in);
  f.extent.t1 = get<std::int64_t>(in);
  f.sres = get<std::int32_t>(in);
  f.tres = get<std::int32_t>(in);
  if (f.sres <= 0 || f.tres <= 0 || f.extent.empty()) corrupt("bad geometry");
  auto nt = get<std::uint32_t>(in), ni = get<std::uint32_t>(in), nj = get<std::uint32_t>(in);
  if (static_cast<int>(nt) != f.nt() || static_cast<int>(ni) != f.ni() || static_cast<int>(nj) != f.nj()) {
    corrupt("dimension mismatch");
  }
  std::vector<float> buf(f.cell_count());
  if (!in.read(reinterpret_cast<char *>(buf.data()), static_cast<std::streamsize>(buf.size() * sizeof(float)))) {
    corrupt("truncated values");
  }
  f.values.assign(buf.begin(), buf.end());
  return f;
}

void save_field(const std::filesystem::path &path, const GridField &field, const Domain &domain) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("IOError", fmt::format("cannot open {}", tmp.string()));
    write_field(out, field, domain);
    out.flush();
    if (!out) throw Error("IOError", fmt::format("cannot write {}", tmp.string()));
  }
  std::filesystem::rename(tmp, path);
}

GridField load_field(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("IOError", fmt::format("cannot open {}", path.string()));
  return read_field(in);
}

std::size_t encoded_size(const GridField &f) {
  return 4 + 4 + 3 * 4 + f.attribute.table.size() + f.attribute.column.size() + f.param_signature.size() + 1 +
         4 * 8 + 2 * 8 + 2 * 8 + 4 * 4 + 2 * 8 + 2 * 4 + 3 * 4 + f.cell_count() * sizeof(float);
}

nlohmann::json field_geojson(const GridField &f, const Domain &domain, int t) {
  nlohmann::json features = nlohmann::json::array();
  if (t >= 0 && t < f.nt()) {
    for (int i = 0; i < f.ni(); ++i) {
      for (int j = 0; j < f.nj(); ++j) {
        BBox b = domain.to_bbox(f.cell_rect(i, j));
        nlohmann::json ring = {{b.lon_min, b.lat_min}, {b.lon_max, b.lat_min}, {b.lon_max, b.lat_max},
                               {b.lon_min, b.lat_max}, {b.lon_min, b.lat_min}};
        features.push_back({{"type", "Feature"},
                            {"geometry", {{"type", "Polygon"}, {"coordinates", {ring}}}},
                            {"properties", {{"value", f.at(t, i, j)}, {"i", i}, {"j", j}}}});
      }
    }
  }
  return {{"type", "FeatureCollection"},
          {"features", features},
          {"properties",
           {{"attribute", f.attribute.str()},
            {"spatial_res", quanta_degrees(f.sres)},
            {"temporal_res", seconds_hours(f.tres)},
            {"time", t >= 0 && t < f.nt() ? format_timestamp(domain.abs(f.step_start(t))) : ""}}}};
}

nlohmann::json field_dense_json(const GridField &f, const Domain &domain) {
  BBox b = domain.to_bbox(f.extent.rect);
  nlohmann::json steps = nlohmann::json::array();
  for (int t = 0; t < f.nt(); ++t) {
    nlohmann::json rows = nlohmann::json::array();
    for (int i = 0; i < f.ni(); ++i) {
      nlohmann::json row = nlohmann::json::array();
      for (int j = 0; j < f.nj(); ++j) row.push_back(f.at(t, i, j));
      rows.push_back(std::move(row));
    }
    steps.push_back({{"t", format_timestamp(domain.abs(f.step_start(t)))}, {"values", std::move(rows)}});
  }
  return {{"attribute", f.attribute.str()},
          {"lat0", b.lat_min},
          {"lon0", b.lon_min},
          {"lat1", b.lat_max},
          {"lon1", b.lon_max},
          {"res", quanta_degrees(f.sres)},
          {"temporal_res", seconds_hours(f.tres)},
          {"rows", f.ni()},
          {"cols", f.nj()},
          {"steps", std::move(steps)}};
}

}  // namespace genie::gridstore
