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
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace genie::gridstore {

/// Smallest spatial step the store understands. Every ladder resolution is
/// an integer multiple of it.
inline constexpr double kQuantumDeg = 0.01;
inline constexpr double kMetersPerDegree = 111320.0;

struct BBox {
  double lat_min = 0.0;
  double lat_max = 0.0;
  double lon_min = 0.0;
  double lon_max = 0.0;

  bool valid() const { return lat_min <= lat_max && lon_min <= lon_max; }
  double area() const { return (lat_max - lat_min) * (lon_max - lon_min); }
  bool intersects(const BBox &o) const {
    return lat_min <= o.lat_max && o.lat_min <= lat_max && lon_min <= o.lon_max && o.lon_min <= lon_max;
  }
  bool contains(const BBox &o) const {
    return lat_min <= o.lat_min && o.lat_max <= lat_max && lon_min <= o.lon_min && o.lon_max <= lon_max;
  }
  bool operator==(const BBox &) const = default;
};

/// Closed interval of UTC timestamps (seconds since the Unix epoch).
struct TimeInterval {
  std::int64_t start = 0;
  std::int64_t end = 0;

  bool valid() const { return start <= end; }
  std::int64_t duration() const { return end - start; }
  bool operator==(const TimeInterval &) const = default;
};

/// Accepts "YYYY-MM-DD", optionally followed by " HH:MM[:SS]" or
/// "THH:MM[:SS]" and a trailing "Z". Throws Error("ParseError").
std::int64_t parse_timestamp(std::string_view text);
std::string format_timestamp(std::int64_t t);

/// Half-open rectangle in quanta relative to the domain south-west corner:
/// i counts latitude quanta, j longitude quanta.
struct QRect {
  int i0 = 0;
  int i1 = 0;
  int j0 = 0;
  int j1 = 0;

  bool empty() const { return i0 >= i1 || j0 >= j1; }
  long long area() const { return empty() ? 0 : static_cast<long long>(i1 - i0) * (j1 - j0); }
  bool contains(const QRect &o) const { return i0 <= o.i0 && o.i1 <= i1 && j0 <= o.j0 && o.j1 <= j1; }
  bool overlaps(const QRect &o) const { return i0 < o.i1 && o.i0 < i1 && j0 < o.j1 && o.j0 < j1; }
  QRect intersect(const QRect &o) const;
  bool operator==(const QRect &) const = default;
};

/// A rectangle times a half-open span of seconds relative to the domain start.
struct Extent {
  QRect rect;
  std::int64_t t0 = 0;
  std::int64_t t1 = 0;

  bool empty() const { return rect.empty() || t0 >= t1; }
  bool operator==(const Extent &) const = default;
};

/// The registered simulation domain. Converts between degrees/timestamps
/// and the integer frame used by the store and coverage map.
class Domain {
 public:
  Domain() = default;
  Domain(BBox bbox, TimeInterval interval);

  const BBox &bbox() const { return bbox_; }
  const TimeInterval &interval() const { return interval_; }
  int lat_quanta() const { return nlat_; }
  int lon_quanta() const { return nlon_; }
  std::int64_t duration() const { return interval_.duration(); }
  QRect full_rect() const { return QRect{0, nlat_, 0, nlon_}; }
  Extent full_extent() const { return Extent{full_rect(), 0, duration()}; }

  /// Smallest quantum rectangle containing `b`, clipped to the domain.
  QRect to_rect(const BBox &b) const;
  BBox to_bbox(const QRect &r) const;
  double lat_at(double i) const { return bbox_.lat_min + i * kQuantumDeg; }
  double lon_at(double j) const { return bbox_.lon_min + j * kQuantumDeg; }
  double i_at(double lat) const { return (lat - bbox_.lat_min) / kQuantumDeg; }
  double j_at(double lon) const { return (lon - bbox_.lon_min) / kQuantumDeg; }
  std::int64_t rel(std::int64_t abs_time) const { return abs_time - interval_.start; }
  std::int64_t abs(std::int64_t rel_time) const { return rel_time + interval_.start; }
  bool contains_point(double lat, double lon) const;
  /// Cell area in km² of a quantum rectangle (equirectangular, evaluated at
  /// the rectangle's centre latitude).
  double area_km2(const QRect &r) const;

 private:
  BBox bbox_;
  TimeInterval interval_;
  int nlat_ = 0;
  int nlon_ = 0;
};

/// Ladder value in degrees → quanta. Throws Error("BadResolution") unless
/// the value is a positive integer multiple of kQuantumDeg.
int resolution_quanta(double degrees);
/// Hours → seconds. Throws Error("BadResolution") unless a positive whole
/// number of seconds.
std::int64_t resolution_seconds(double hours);
inline double quanta_degrees(int q) { return q * kQuantumDeg; }
inline double seconds_hours(std::int64_t s) { return static_cast<double>(s) / 3600.0; }

inline std::int64_t floor_to(std::int64_t v, std::int64_t step) {
  std::int64_t q = v / step;
  if (v % step != 0 && v < 0) --q;
  return q * step;
}
inline std::int64_t ceil_to(std::int64_t v, std::int64_t step) { return -floor_to(-v, step); }

/// Grows `r` to multiples of `res` (from the origin) and clips it to `bounds`.
QRect align_rect(const QRect &r, int res, const QRect &bounds);
/// Grows [t0, t1) to multiples of `tres` and clips it to [0, limit).
std::pair<std::int64_t, std::int64_t> align_span(std::int64_t t0, std::int64_t t1, std::int64_t tres,
                                                 std::int64_t limit);

/// Disjoint rectangles whose union equals the union of the inputs.
std::vector<BBox> union_boxes(const std::vector<BBox> &boxes);
std::vector<QRect> union_rects(const std::vector<QRect> &rects);

/// One axis-aligned box per point, Δlat = r/111320, Δlon = r/(111320·cos lat),
/// clipped to `clip` and merged into a disjoint rectangle set. Points at
/// |lat| ≥ 89° get the full width of `clip`.
std::vector<BBox> buffer_extent(const std::vector<std::pair<double, double>> &points, double radius_m,
                                const BBox &clip = BBox{-90.0, 90.0, -180.0, 180.0});

/// Distance in metres from a point to the nearest point of a box
/// (equirectangular at the point's latitude; 0 inside).
double point_box_distance_m(double lat, double lon, const BBox &box);
/// Distance in metres between two points (equirectangular at mean latitude).
double point_distance_m(double lat1, double lon1, double lat2, double lon2);

}  // namespace genie::gridstore
