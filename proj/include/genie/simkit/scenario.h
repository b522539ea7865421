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

#include <cstdint>
#include <filesystem>
#include <utility>
#include <vector>

#include "genie/gridstore/geometry.h"
#include "genie/gridstore/table.h"

namespace genie::simkit {

inline constexpr double kMaxWindSpeed = 40.0;

/// Spatially uniform wind, piecewise constant over fixed intervals counted
/// from `origin` (seconds relative to the domain start). Times outside the
/// series reuse the nearest sample.
class WindField {
 public:
  WindField() = default;
  static WindField uniform(double u, double v);
  /// `uv[k]` is the (east, north) wind in m/s during
  /// [origin + k * interval_s, origin + (k + 1) * interval_s).
  static WindField series(std::vector<std::pair<double, double>> uv, std::int64_t interval_s = 3600,
                          std::int64_t origin = 0);

  std::pair<double, double> at(double t) const;
  /// Exact displacement in metres between relative times ta <= tb.
  std::pair<double, double> displacement(double ta, double tb) const;

  std::size_t samples() const { return uv_.size(); }
  std::int64_t interval() const { return interval_; }
  std::int64_t origin() const { return origin_; }

 private:
  std::vector<std::pair<double, double>> uv_{{0.0, 0.0}};
  std::int64_t interval_ = 3600;
  std::int64_t origin_ = 0;
};

/// CSV with header `time,u,v` (time as accepted by parse_timestamp), rows
/// evenly spaced. Errors: ParseError, InvalidWind (non-finite or faster than
/// kMaxWindSpeed).
WindField load_wind_csv(const std::filesystem::path &file, const gridstore::Domain &domain);
WindField parse_wind_csv(const std::string &text, const gridstore::Domain &domain);

struct Ignition {
  std::int64_t fire_id = 0;
  double lat = 0.0;
  double lon = 0.0;
  std::int64_t start = 0;  // seconds relative to the domain start
  double duration_h = 0.0;
  double intensity = 0.0;
};

/// Reads ignitions from a stored table with columns fire_id, location,
/// start_time, duration and fire_intensity. Errors: MissingIgnitionFields.
std::vector<Ignition> ignitions_from_table(const gridstore::StoredTable &table, const gridstore::Domain &domain);

}  // namespace genie::simkit
