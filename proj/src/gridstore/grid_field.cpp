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

#include "genie/gridstore/grid_field.h"

#include <cmath>

#include <fmt/format.h>

#include "genie/error.h"

namespace genie::gridstore {

QRect GridField::cell_rect(int i, int j) const {
  QRect r{extent.rect.i0 + i * sres, extent.rect.i0 + (i + 1) * sres, extent.rect.j0 + j * sres,
          extent.rect.j0 + (j + 1) * sres};
  r.i1 = std::min(r.i1, extent.rect.i1);
  r.j1 = std::min(r.j1, extent.rect.j1);
  return r;
}

GridField GridField::make(Attribute attribute, int sres, std::int64_t tres, const Extent &extent) {
  if (sres <= 0 || tres <= 0) throw Error("InvalidField", "resolutions must be positive");
  GridField f;
  f.attribute = std::move(attribute);
  f.sres = sres;
  f.tres = tres;
  f.extent = extent;
  f.values.assign(f.cell_count(), 0.0);
  return f;
}

void validate(const GridField &f, const Domain &domain) {
  auto fail = [&](const std::string &why) {
    throw Error("InvalidField", fmt::format("field {}: {}", f.attribute.str(), why));
  };
  if (f.sres <= 0 || f.tres <= 0) fail("non-positive resolution");
  const QRect &r = f.extent.rect;
  if (f.extent.empty()) fail("empty extent");
  if (!domain.full_rect().contains(r) || f.extent.t0 < 0 || f.extent.t1 > domain.duration()) {
    fail("extent exceeds the domain");
  }
  if (r.i0 % f.sres || r.j0 % f.sres || f.extent.t0 % f.tres) fail("extent not aligned to its resolution");
  if ((r.i1 % f.sres && r.i1 != domain.lat_quanta()) || (r.j1 % f.sres && r.j1 != domain.lon_quanta()) ||
      (f.extent.t1 % f.tres && f.extent.t1 != domain.duration())) {
    fail("extent end neither aligned nor on the domain edge");
  }
  if (f.values.size() != f.cell_count()) fail("value count does not match geometry");
  for (double v : f.values) {
    if (!std::isfinite(v)) fail("non-finite value");
  }
}

}  // namespace genie::gridstore
