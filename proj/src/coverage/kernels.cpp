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

#include <algorithm>
#include <map>
#include <tuple>

#include "genie/coverage/coverage.h"

namespace genie::coverage {

namespace {

using gridstore::align_rect;
using gridstore::align_span;

// Cells k of size `res` starting at `origin` (the last one clipped at
// `edge`) whose footprint lies inside [a, b).
std::pair<int, int> inside(std::int64_t origin, std::int64_t res, std::int64_t a, std::int64_t b, int n,
                           std::int64_t edge) {
  std::int64_t lo = a <= origin ? 0 : (a - origin + res - 1) / res;
  std::int64_t hi = b >= edge ? n : (b - origin) / res;
  lo = std::clamp<std::int64_t>(lo, 0, n);
  hi = std::clamp<std::int64_t>(hi, lo, n);
  return {static_cast<int>(lo), static_cast<int>(hi)};
}

struct Frame {
  QRect box;
  int ni = 0;
  int nj = 0;
  std::int64_t t0 = 0;
  std::int64_t t1 = 0;
  int nt = 0;
  std::vector<char> requested;
};

bool build_frame(const gridstore::Domain &domain, const GridRequest &req, Frame &f) {
  const QRect bounds = domain.full_rect();
  std::vector<QRect> rects;
  for (const auto &r : req.rects) {
    QRect a = align_rect(r, req.sres, bounds);
    if (!a.empty()) rects.push_back(a);
  }
  std::tie(f.t0, f.t1) = align_span(req.t0, req.t1, req.tres, domain.duration());
  if (rects.empty() || f.t0 >= f.t1) return false;
  f.box = rects[0];
  for (const auto &r : rects) {
    f.box.i0 = std::min(f.box.i0, r.i0);
    f.box.i1 = std::max(f.box.i1, r.i1);
    f.box.j0 = std::min(f.box.j0, r.j0);
    f.box.j1 = std::max(f.box.j1, r.j1);
  }
  const int s = req.sres;
  f.ni = (f.box.i1 - f.box.i0 + s - 1) / s;
  f.nj = (f.box.j1 - f.box.j0 + s - 1) / s;
  f.nt = static_cast<int>((f.t1 - f.t0 + req.tres - 1) / req.tres);
  f.requested.assign(static_cast<std::size_t>(f.ni) * f.nj, 0);
  for (const auto &r : rects) {
    for (int i = (r.i0 - f.box.i0) / s; i < (r.i1 - f.box.i0 + s - 1) / s; ++i) {
      for (int j = (r.j0 - f.box.j0) / s; j < (r.j1 - f.box.j0 + s - 1) / s; ++j) {
        f.requested[static_cast<std::size_t>(i) * f.nj + j] = 1;
      }
    }
  }
  return true;
}

std::vector<QRect> step_rects(const gridstore::Domain &domain, const GridRequest &req, const Frame &f,
                              const std::vector<const CoverageEntry *> &usable, int t) {
  const int s = req.sres;
  const std::int64_t ts = f.t0 + t * req.tres;
  const std::int64_t te = std::min(f.t1, ts + req.tres);
  std::vector<char> mask = f.requested;
  for (const CoverageEntry *e : usable) {
    if (e->extent.t0 > ts || e->extent.t1 < te) continue;
    auto [ia, ib] = inside(f.box.i0, s, e->extent.rect.i0, e->extent.rect.i1, f.ni, domain.lat_quanta());
    auto [ja, jb] = inside(f.box.j0, s, e->extent.rect.j0, e->extent.rect.j1, f.nj, domain.lon_quanta());
    for (int i = ia; i < ib; ++i) {
      std::fill(mask.begin() + static_cast<std::ptrdiff_t>(i) * f.nj + ja,
                mask.begin() + static_cast<std::ptrdiff_t>(i) * f.nj + jb, 0);
    }
  }
  // Horizontal runs per row, stacked while the same run repeats below.
  std::vector<QRect> out;
  std::map<std::pair<int, int>, int> open;  // (j0, j1) -> first row
  auto emit = [&](std::pair<int, int> run, int r0, int r1) {
    QRect q{f.box.i0 + r0 * s, std::min(f.box.i0 + r1 * s, domain.lat_quanta()), f.box.j0 + run.first * s,
            std::min(f.box.j0 + run.second * s, domain.lon_quanta())};
    out.push_back(q);
  };
  for (int i = 0; i <= f.ni; ++i) {
    std::map<std::pair<int, int>, int> next;
    if (i < f.ni) {
      const char *row = mask.data() + static_cast<std::ptrdiff_t>(i) * f.nj;
      int j = 0;
      while (j < f.nj) {
        if (!row[j]) {
          ++j;
          continue;
        }
        int a = j;
        while (j < f.nj && row[j]) ++j;
        auto run = std::make_pair(a, j);
        auto it = open.find(run);
        if (it != open.end()) {
          next[run] = it->second;
          open.erase(it);
        } else {
          next[run] = i;
        }
      }
    }
    for (const auto &[run, r0] : open) emit(run, r0, i);
    open = std::move(next);
  }
  std::sort(out.begin(), out.end(), [](const QRect &a, const QRect &b) {
    return std::tie(a.i0, a.j0, a.i1, a.j1) < std::tie(b.i0, b.j0, b.i1, b.j1);
  });
  return out;
}

}  // namespace

GapSet find_gaps_kernel(const gridstore::Domain &domain, const GridRequest &req,
                        const std::vector<const CoverageEntry *> &candidates, bool parallel) {
  GapSet gs;
  gs.sres = req.sres;
  gs.tres = req.tres;
  Frame f;
  if (!build_frame(domain, req, f)) return gs;

  std::vector<const CoverageEntry *> usable;
  for (const CoverageEntry *e : candidates) {
    if (e->attribute != req.attribute || !satisfies(*e, req.sres, req.tres)) continue;
    if (e->extent.t1 <= f.t0 || e->extent.t0 >= f.t1 || !e->extent.rect.overlaps(f.box)) continue;
    usable.push_back(e);
  }

  std::vector<std::vector<QRect>> steps(f.nt);
  if (parallel) {
#pragma omp parallel for schedule(dynamic, 1)
    for (int t = 0; t < f.nt; ++t) steps[t] = step_rects(domain, req, f, usable, t);
  } else {
    for (int t = 0; t < f.nt; ++t) steps[t] = step_rects(domain, req, f, usable, t);
  }

  auto key = [](const QRect &r) { return std::make_tuple(r.i0, r.i1, r.j0, r.j1); };
  std::map<std::tuple<int, int, int, int>, std::int64_t> open;
  for (int t = 0; t <= f.nt; ++t) {
    const std::int64_t ts = std::min(f.t1, f.t0 + t * req.tres);
    std::map<std::tuple<int, int, int, int>, std::int64_t> next;
    if (t < f.nt) {
      for (const auto &r : steps[t]) {
        auto it = open.find(key(r));
        if (it != open.end()) {
          next[key(r)] = it->second;
          open.erase(it);
        } else {
          next[key(r)] = ts;
        }
      }
    }
    for (const auto &[k, start] : open) {
      gs.gaps.push_back(Extent{QRect{std::get<0>(k), std::get<1>(k), std::get<2>(k), std::get<3>(k)}, start, ts});
    }
    open = std::move(next);
  }
  std::sort(gs.gaps.begin(), gs.gaps.end(), [](const Extent &a, const Extent &b) {
    return std::tie(a.t0, a.rect.i0, a.rect.j0, a.t1, a.rect.i1, a.rect.j1) <
           std::tie(b.t0, b.rect.i0, b.rect.j0, b.t1, b.rect.i1, b.rect.j1);
  });
  return gs;
}

}  // namespace genie::coverage
