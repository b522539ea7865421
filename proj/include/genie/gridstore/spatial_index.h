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
#include <memory>
#include <vector>

#include "genie/gridstore/geometry.h"

namespace genie::gridstore {

/// R-tree over closed rectangles keyed by a 64-bit payload id.
class SpatialIndex {
 public:
  SpatialIndex();
  ~SpatialIndex();
  SpatialIndex(SpatialIndex &&) noexcept;
  SpatialIndex &operator=(SpatialIndex &&) noexcept;

  void insert(std::uint64_t id, const BBox &box);
  bool remove(std::uint64_t id, const BBox &box);
  void clear();
  std::size_t size() const;

  /// Ids whose rectangles intersect `box` (touching edges count), sorted.
  std::vector<std::uint64_t> query(const BBox &box) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace genie::gridstore
