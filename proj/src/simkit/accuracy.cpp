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

#include "genie/simkit/accuracy.h"

#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "genie/error.h"

namespace genie::simkit {

using gridstore::GridField;

GridField restrict_to(const GridField &ref, const GridField &like) {
  const auto &fe = like.extent;
  const auto &re = ref.extent;
  if (like.sres % ref.sres || like.tres % ref.tres || !re.rect.contains(fe.rect) || fe.t0 < re.t0 ||
      fe.t1 > re.t1 || (fe.rect.i0 - re.rect.i0) % ref.sres || (fe.rect.j0 - re.rect.j0) % ref.sres ||
      (fe.t0 - re.t0) % ref.tres) {
    throw Error("GeometryMismatch", fmt::format("reference grid ({}q, {}s) does not nest in field grid ({}q, {}s) "
                                                "over the field extent",
                                                ref.sres, ref.tres, like.sres, like.tres));
  }
  GridField out = GridField::make(like.attribute, like.sres, like.tres, fe);
  const int ri0 = (fe.rect.i0 - re.rect.i0) / ref.sres, rj0 = (fe.rect.j0 - re.rect.j0) / ref.sres;
  const int rt0 = static_cast<int>((fe.t0 - re.t0) / ref.tres);
  for (int t = 0; t < like.nt(); ++t) {
    const int ta = rt0 + static_cast<int>((like.step_start(t) - fe.t0) / ref.tres);
    const int tb = rt0 + static_cast<int>((like.step_end(t) - fe.t0 + ref.tres - 1) / ref.tres);
    for (int i = 0; i < like.ni(); ++i) {
      auto cr = like.cell_rect(i, 0);
      const int ia = ri0 + (cr.i0 - fe.rect.i0) / ref.sres, ib = ri0 + (cr.i1 - fe.rect.i0 + ref.sres - 1) / ref.sres;
      for (int j = 0; j < like.nj(); ++j) {
        auto cj = like.cell_rect(i, j);
        const int ja = rj0 + (cj.j0 - fe.rect.j0) / ref.sres,
                  jb = rj0 + (cj.j1 - fe.rect.j0 + ref.sres - 1) / ref.sres;
        double sum = 0.0, w = 0.0;
        for (int rt = ta; rt < tb; ++rt) {
          double dt = static_cast<double>(ref.step_end(rt) - ref.step_start(rt));
          for (int ri = ia; ri < ib; ++ri) {
            for (int rj = ja; rj < jb; ++rj) {
              double a = static_cast<double>(ref.cell_rect(ri, rj).area()) * dt;
              sum += ref.at(rt, ri, rj) * a;
              w += a;
            }
          }
        }
        out.at(t, i, j) = w > 0.0 ? sum / w : std::numeric_limits<double>::quiet_NaN();
      }
    }
  }
  return out;
}

double accuracy_score(const GridField &field, const GridField &reference) {
  GridField ref = restrict_to(reference, field);
  double lo = std::numeric_limits<double>::infinity(), hi = -lo, se = 0.0;
  for (std::size_t k = 0; k < ref.values.size(); ++k) {
    double r = ref.values[k], v = field.values[k];
    if (!std::isfinite(r) || !std::isfinite(v)) throw Error("GeometryMismatch", "field or reference has gaps");
    lo = std::min(lo, r);
    hi = std::max(hi, r);
    se += (v - r) * (v - r);
  }
  if (ref.values.empty()) throw Error("GeometryMismatch", "empty field");
  double rmse = std::sqrt(se / static_cast<double>(ref.values.size()));
  if (hi - lo <= 0.0) return rmse == 0.0 ? 1.0 : 0.0;
  return 1.0 - rmse / (hi - lo);
}

}  // namespace genie::simkit
