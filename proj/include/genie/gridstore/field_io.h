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

#pragma once

#include <filesystem>
#include <iosfwd>

#include <nlohmann/json.hpp>

#include "genie/gridstore/grid_field.h"

namespace genie::gridstore {

// Binary layout, all integers and floats little-endian:
//   char[4]  magic "GNFD"
//   u32      version (1)
//   str      table, column, param_signature   (u32 length + bytes each)
//   u8       value kind (0 intensive, 1 extensive)
//   f64 x4   bbox lat_min, lat_max, lon_min, lon_max (degrees)
//   i64 x2   interval start, end (unix seconds)
//   f64 x2   spatial_res (degrees), temporal_res (hours)
//   i32 x4   rect i0, i1, j0, j1 (quanta from the domain origin)
//   i64 x2   t0, t1 (seconds from the domain start)
//   i32 x2   sres (quanta), tres (seconds)
//   u32 x3   nt, ni, nj
//   f32[]    nt*ni*nj values, index (t * ni + i) * nj + j
inline constexpr char kFieldMagic[4] = {'G', 'N', 'F', 'D'};
inline constexpr std::uint32_t kFieldVersion = 1;

void write_field(std::ostream &out, const GridField &field, const Domain &domain);
GridField read_field(std::istream &in);

/// Writes to `path` through a temporary sibling and a rename.
void save_field(const std::filesystem::path &path, const GridField &field, const Domain &domain);
GridField load_field(const std::filesystem::path &path);

/// Size in bytes of the on-disk encoding.
std::size_t encoded_size(const GridField &field);

/// Cells of time step `t` as GeoJSON polygons with a "value" property.
nlohmann::json field_geojson(const GridField &field, const Domain &domain, int t);
/// Dense row-major grid: {"lat0","lon0","res","rows","cols","steps":[{"t","values":[[...]]}]}.
nlohmann::json field_dense_json(const GridField &field, const Domain &domain);

}  // namespace genie::gridstore
