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

#include "genie/gridstore/geometry.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <tuple>

#include <fmt/format.h>

#include "genie/error.h"

namespace genie::gridstore {

namespace {

constexpr double kSnap = 1e-6;

// Howard Hinnant's days_from_civil.
std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, std::int64_t &y, unsigned &m, unsigned &d) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  y = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  d = doy - (153 * mp + 2) / 5 + 1;
  m = mp < 10 ? mp + 3 : mp - 9;
  y += m <= 2;
}

bool digits(std::string_view s, std::size_t pos, std::size_t n, int &out) {
  if (pos + n > s.size()) return false;
  out = 0;
  for (std::size_t k = 0; k < n; ++k) {
    char c = s[pos + k];
    if (c < '0' || c > '9') return false;
    out = out * 10 + (c - '0');
  }
  return true;
}

[[noreturn]] void bad_timestamp(std::string_view text) {
  throw Error("ParseError", fmt::format("invalid timestamp '{}'", text));
}

int snap_floor(double x) { return static_cast<int>(std::floor(x + kSnap)); }
int snap_ceil(double x) { return static_cast<int>(std::ceil(x - kSnap)); }

template <typename Box, typename Coord, typename Make>
std::vector<Box> union_generic(const std::vector<Box> &boxes, Coord Box::*a0, Coord Box::*a1, Coord Box::*b0,
                               Coord Box::*b1, Make make) {
  std::vector<Coord> xs, ys;
  std::vector<const Box *> live;
  for (const auto &b : boxes) {
    if (!(b.*a0 < b.*a1) || !(b.*b0 < b.*b1)) continue;
    live.push_back(&b);
    xs.push_back(b.*a0);
    xs.push_back(b.*a1);
    ys.push_back(b.*b0);
    ys.push_back(b.*b1);
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  std::sort(ys.begin(), ys.end());
  ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
  if (live.empty()) return {};
  const std::size_t nx = xs.size() - 1, ny = ys.size() - 1;
  std::vector<char> cover(nx * ny, 0);
  for (const Box *b : live) {
    auto x0 = std::lower_bound(xs.begin(), xs.end(), b->*a0) - xs.begin();
    auto x1 = std::lower_bound(xs.begin(), xs.end(), b->*a1) - xs.begin();
    auto y0 = std::lower_bound(ys.begin(), ys.end(), b->*b0) - ys.begin();
    auto y1 = std::lower_bound(ys.begin(), ys.end(), b->*b1) - ys.begin();
    for (auto x = x0; x < x1; ++x) {
      for (auto y = y0; y < y1; ++y) cover[x * ny + y] = 1;
    }
  }
  // Runs along y in each x band, then stack identical runs of adjacent bands.
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> open;  // run -> starting band
  std::vector<Box> out;
  auto close = [&](std::pair<std::size_t, std::size_t> run, std::size_t from, std::size_t to) {
    out.push_back(make(xs[from], xs[to], ys[run.first], ys[run.second]));
  };
  for (std::size_t x = 0; x <= nx; ++x) {
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> next;
    if (x < nx) {
      std::size_t y = 0;
      while (y < ny) {
        if (!cover[x * ny + y]) {
          ++y;
          continue;
        }
        std::size_t s = y;
        while (y < ny && cover[x * ny + y]) ++y;
        auto run = std::make_pair(s, y);
        auto it = open.find(run);
        next[run] = it != open.end() ? it->second : x;
        if (it != open.end()) open.erase(it);
      }
    }
    for (const auto &[run, from] : open) close(run, from, x);
    open = std::move(next);
  }
  return out;
}

}  // namespace

std::int64_t parse_timestamp(std::string_view text) {
  std::string_view s = text;
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  if (!s.empty() && (s.back() == 'Z' || s.back() == 'z')) s.remove_suffix(1);
  int y = 0, mo = 0, d = 0, h = 0, mi = 0, sec = 0;
  if (!digits(s, 0, 4, y) || s.size() < 10 || s[4] != '-' || !digits(s, 5, 2, mo) || s[7] != '-' ||
      !digits(s, 8, 2, d)) {
    bad_timestamp(text);
  }
  if (s.size() > 10) {
    if ((s[10] != ' ' && s[10] != 'T' && s[10] != 't') || !digits(s, 11, 2, h) || s.size() < 16 ||
        s[13] != ':' || !digits(s, 14, 2, mi)) {
      bad_timestamp(text);
    }
    if (s.size() > 16) {
      if (s.size() != 19 || s[16] != ':' || !digits(s, 17, 2, sec)) bad_timestamp(text);
    }
  }
  static const int kDays[] = {31, 29, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  if (mo < 1 || mo > 12 || d < 1 || d > kDays[mo - 1] || h > 23 || mi > 59 || sec > 59) bad_timestamp(text);
  bool leap = (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
  if (mo == 2 && d == 29 && !leap) bad_timestamp(text);
  return days_from_civil(y, static_cast<unsigned>(mo), static_cast<unsigned>(d)) * 86400 + h * 3600 + mi * 60 +
         sec;
}

std::string format_timestamp(std::int64_t t) {
  std::int64_t days = floor_to(t, 86400) / 86400;
  std::int64_t rem = t - days * 86400;
  std::int64_t y;
  unsigned m, d;
  civil_from_days(days, y, m, d);
  return fmt::format("{:04d}-{:02d}-{:02d}T{:02d}:{:02d}:{:02d}Z", y, m, d, rem / 3600, (rem / 60) % 60, rem % 60);
}

QRect QRect::intersect(const QRect &o) const {
  QRect r{std::max(i0, o.i0), std::min(i1, o.i1), std::max(j0, o.j0), std::min(j1, o.j1)};
  if (r.empty()) return QRect{};
  return r;
}

Domain::Domain(BBox bbox, TimeInterval interval) : bbox_(bbox), interval_(interval) {
  if (!bbox.valid() || bbox.area() <= 0.0 || interval.duration() <= 0) {
    throw Error("InvalidDomain", "domain must have positive area and duration");
  }
  double nlat = (bbox.lat_max - bbox.lat_min) / kQuantumDeg;
  double nlon = (bbox.lon_max - bbox.lon_min) / kQuantumDeg;
  nlat_ = static_cast<int>(std::lround(nlat));
  nlon_ = static_cast<int>(std::lround(nlon));
  if (std::fabs(nlat - nlat_) > 1e-6 || std::fabs(nlon - nlon_) > 1e-6) {
    throw Error("InvalidDomain", "domain bounds must be multiples of 0.01 degrees apart");
  }
}

QRect Domain::to_rect(const BBox &b) const {
  QRect r{snap_floor(i_at(b.lat_min)), snap_ceil(i_at(b.lat_max)), snap_floor(j_at(b.lon_min)),
          snap_ceil(j_at(b.lon_max))};
  return r.intersect(full_rect());
}

BBox Domain::to_bbox(const QRect &r) const {
  return BBox{lat_at(r.i0), lat_at(r.i1), lon_at(r.j0), lon_at(r.j1)};
}

bool Domain::contains_point(double lat, double lon) const {
  return lat >= bbox_.lat_min && lat <= bbox_.lat_max && lon >= bbox_.lon_min && lon <= bbox_.lon_max;
}

double Domain::area_km2(const QRect &r) const {
  double lat_c = lat_at(0.5 * (r.i0 + r.i1));
  double km = kQuantumDeg * kMetersPerDegree / 1000.0;
  return (r.i1 - r.i0) * km * (r.j1 - r.j0) * km * std::cos(lat_c * M_PI / 180.0);
}

int resolution_quanta(double degrees) {
  double q = degrees / kQuantumDeg;
  long r = std::lround(q);
  if (!(degrees > 0.0) || r <= 0 || std::fabs(q - r) > 1e-6) {
    throw Error("BadResolution", fmt::format("spatial resolution {} is not a multiple of {}", degrees, kQuantumDeg));
  }
  return static_cast<int>(r);
}

std::int64_t resolution_seconds(double hours) {
  double s = hours * 3600.0;
  long long r = std::llround(s);
  if (!(hours > 0.0) || r <= 0 || std::fabs(s - static_cast<double>(r)) > 1e-6) {
    throw Error("BadResolution", fmt::format("temporal resolution {} h is not a whole number of seconds", hours));
  }
  return r;
}

QRect align_rect(const QRect &r, int res, const QRect &bounds) {
  QRect a{static_cast<int>(floor_to(r.i0, res)), static_cast<int>(ceil_to(r.i1, res)),
          static_cast<int>(floor_to(r.j0, res)), static_cast<int>(ceil_to(r.j1, res))};
  return a.intersect(bounds);
}

std::pair<std::int64_t, std::int64_t> align_span(std::int64_t t0, std::int64_t t1, std::int64_t tres,
                                                 std::int64_t limit) {
  std::int64_t a = std::max<std::int64_t>(0, floor_to(t0, tres));
  std::int64_t b = std::min(limit, ceil_to(t1, tres));
  if (b < a) b = a;
  return {a, b};
}

std::vector<BBox> union_boxes(const std::vector<BBox> &boxes) {
  return union_generic(boxes, &BBox::lat_min, &BBox::lat_max, &BBox::lon_min, &BBox::lon_max,
                       [](double a, double b, double c, double d) { return BBox{a, b, c, d}; });
}

std::vector<QRect> union_rects(const std::vector<QRect> &rects) {
  return union_generic(rects, &QRect::i0, &QRect::i1, &QRect::j0, &QRect::j1,
                       [](int a, int b, int c, int d) { return QRect{a, b, c, d}; });
}

std::vector<BBox> buffer_extent(const std::vector<std::pair<double, double>> &points, double radius_m,
                                const BBox &clip) {
  if (!(radius_m > 0.0)) throw Error("InvalidArgument", "buffer radius must be positive");
  std::vector<BBox> boxes;
  boxes.reserve(points.size());
  for (const auto &[lat, lon] : points) {
    double dlat = radius_m / kMetersPerDegree;
    BBox b;
    b.lat_min = std::max(clip.lat_min, lat - dlat);
    b.lat_max = std::min(clip.lat_max, lat + dlat);
    if (std::fabs(lat) >= 89.0) {
      b.lon_min = clip.lon_min;
      b.lon_max = clip.lon_max;
    } else {
      double dlon = radius_m / (kMetersPerDegree * std::cos(lat * M_PI / 180.0));
      b.lon_min = std::max(clip.lon_min, lon - dlon);
      b.lon_max = std::min(clip.lon_max, lon + dlon);
    }
    if (b.lat_min < b.lat_max && b.lon_min < b.lon_max) boxes.push_back(b);
  }
  return union_boxes(boxes);
}

double point_box_distance_m(double lat, double lon, const BBox &box) {
  double dlat = std::max({box.lat_min - lat, 0.0, lat - box.lat_max});
  double dlon = std::max({box.lon_min - lon, 0.0, lon - box.lon_max});
  double dy = dlat * kMetersPerDegree;
  double dx = dlon * kMetersPerDegree * std::cos(lat * M_PI / 180.0);
  return std::sqrt(dx * dx + dy * dy);
}

double point_distance_m(double lat1, double lon1, double lat2, double lon2) {
  double dy = (lat2 - lat1) * kMetersPerDegree;
  double dx = (lon2 - lon1) * kMetersPerDegree * std::cos(0.5 * (lat1 + lat2) * M_PI / 180.0);
  return std::sqrt(dx * dx + dy * dy);
}

}  // namespace genie::gridstore
