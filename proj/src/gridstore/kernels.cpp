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

#include <fmt/format.h>

#include "genie/error.h"
#include "genie/gridstore/grid_field.h"

namespace genie::gridstore {

namespace {

void check_ratio(const GridField &f, int sres, std::int64_t tres) {
  if (sres <= 0 || tres <= 0 || sres % f.sres != 0 || tres % f.tres != 0) {
    throw Error("NonIntegerRatio", fmt::format("cannot aggregate {}q/{}s to {}q/{}s", f.sres, f.tres, sres, tres));
  }
  if (f.extent.rect.i0 % sres || f.extent.rect.j0 % sres || f.extent.t0 % tres) {
    throw Error("NonIntegerRatio", "field extent is not aligned to the target grid");
  }
}

double out_cell(const GridField &f, const GridField &out, int t, int i, int j) {
  const int ri = out.sres / f.sres;
  const auto rt = static_cast<int>(out.tres / f.tres);
  const int ni = f.ni(), nj = f.nj(), nt = f.nt();
  double sum = 0.0, wsum = 0.0;
  for (int dt = 0; dt < rt; ++dt) {
    int ft = t * rt + dt;
    if (ft >= nt) break;
    double wt = static_cast<double>(f.step_end(ft) - f.step_start(ft));
    for (int di = 0; di < ri; ++di) {
      int fi = i * ri + di;
      if (fi >= ni) break;
      for (int dj = 0; dj < ri; ++dj) {
        int fj = j * ri + dj;
        if (fj >= nj) break;
        double w = wt * static_cast<double>(f.cell_rect(fi, fj).area());
        sum += w * f.at(ft, fi, fj);
        wsum += w;
      }
    }
  }
  return wsum > 0.0 ? sum / wsum : 0.0;
}

GridField prepare(const GridField &f, int sres, std::int64_t tres) {
  check_ratio(f, sres, tres);
  GridField out = GridField::make(f.attribute, sres, tres, f.extent);
  out.param_signature = f.param_signature;
  out.value_kind = f.value_kind;
  return out;
}

}  // namespace

GridField aggregate_serial(const GridField &f, int sres, std::int64_t tres) {
  GridField out = prepare(f, sres, tres);
  const int nt = out.nt(), ni = out.ni(), nj = out.nj();
  for (int t = 0; t < nt; ++t) {
    for (int i = 0; i < ni; ++i) {
      for (int j = 0; j < nj; ++j) out.at(t, i, j) = out_cell(f, out, t, i, j);
    }
  }
  return out;
}

GridField aggregate(const GridField &f, int sres, std::int64_t tres) {
  GridField out = prepare(f, sres, tres);
  const int nt = out.nt(), ni = out.ni(), nj = out.nj();
  const long long rows = static_cast<long long>(nt) * ni;
#pragma omp parallel for schedule(static) if (out.cell_count() > 4096)
  for (long long r = 0; r < rows; ++r) {
    int t = static_cast<int>(r / ni), i = static_cast<int>(r % ni);
    for (int j = 0; j < nj; ++j) out.at(t, i, j) = out_cell(f, out, t, i, j);
  }
  return out;
}

}  // namespace genie::gridstore
