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

#include "genie/gridstore/spatial_index.h"

#include <algorithm>
#include <iterator>

#include <boost/geometry.hpp>
#include <boost/geometry/index/rtree.hpp>

namespace genie::gridstore {

namespace bg = boost::geometry;
namespace bgi = boost::geometry::index;

using Point = bg::model::point<double, 2, bg::cs::cartesian>;
using Box = bg::model::box<Point>;
using Value = std::pair<Box, std::uint64_t>;

namespace {

Box to_box(const BBox &b) { return Box(Point(b.lon_min, b.lat_min), Point(b.lon_max, b.lat_max)); }

}  // namespace

struct SpatialIndex::Impl {
  bgi::rtree<Value, bgi::rstar<16>> tree;
};

SpatialIndex::SpatialIndex() : impl_(std::make_unique<Impl>()) {}
SpatialIndex::~SpatialIndex() = default;
SpatialIndex::SpatialIndex(SpatialIndex &&) noexcept = default;
SpatialIndex &SpatialIndex::operator=(SpatialIndex &&) noexcept = default;

void SpatialIndex::insert(std::uint64_t id, const BBox &box) { impl_->tree.insert(Value(to_box(box), id)); }

bool SpatialIndex::remove(std::uint64_t id, const BBox &box) {
  return impl_->tree.remove(Value(to_box(box), id)) > 0;
}

void SpatialIndex::clear() { impl_->tree.clear(); }

std::size_t SpatialIndex::size() const { return impl_->tree.size(); }

std::vector<std::uint64_t> SpatialIndex::query(const BBox &box) const {
  std::vector<Value> hits;
  impl_->tree.query(bgi::intersects(to_box(box)), std::back_inserter(hits));
  std::vector<std::uint64_t> ids;
  ids.reserve(hits.size());
  for (const auto &h : hits) ids.push_back(h.second);
  std::sort(ids.begin(), ids.end());
  return ids;
}

}  // namespace genie::gridstore
