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

#include "genie/planner/epochs.h"

#include <algorithm>

#include <fmt/format.h>

#include "genie/error.h"
#include "genie/planner/optimizer.h"

namespace genie::planner {

const char *mode_name(PlanMode m) {
  switch (m) {
    case PlanMode::Progressive: return "progressive";
    case PlanMode::Adaptive: return "adaptive";
    case PlanMode::Optimize: return "optimize";
    case PlanMode::StaticHigh: return "static_high";
    case PlanMode::StaticLow: return "static_low";
  }
  return "?";
}

PlanMode parse_mode(const std::string &text) {
  for (auto m : {PlanMode::Progressive, PlanMode::Adaptive, PlanMode::Optimize, PlanMode::StaticHigh,
                 PlanMode::StaticLow}) {
    if (text == mode_name(m)) return m;
  }
  throw Error("InvalidArgument", fmt::format("unknown mode '{}'", text));
}

const EpochSpec *EpochPlan::find(int epoch) const {
  for (const auto &e : epochs) {
    if (e.epoch == epoch) return &e;
  }
  return nullptr;
}

EpochPlan schedule_epochs(const RequirementSpec &req, std::optional<double> refine_threshold, PlanMode mode,
                          const Ladder &ladder) {
  EpochPlan plan;
  plan.mode = mode;
  plan.threshold = refine_threshold;
  bool hinted = req.hint("spatial_res") || req.hint("temporal_res");
  auto fine = EpochSpec{3, ladder.fine_s, ladder.fine_t, EpochRegion::Explicit};

  switch (mode) {
    case PlanMode::StaticHigh:
      plan.epochs.push_back(EpochSpec{1, ladder.high_s, ladder.high_t, EpochRegion::Full, false, false, true});
      break;
    case PlanMode::StaticLow:
      plan.epochs.push_back(EpochSpec{1, ladder.coarse_s, ladder.coarse_t, EpochRegion::Full, false, false, true});
      break;
    case PlanMode::Optimize:
      plan.epochs.push_back(EpochSpec{1, 0.0, 0.0, EpochRegion::Full, true});
      plan.epochs.push_back(fine);
      break;
    case PlanMode::Adaptive: {
      auto [s, t] = class_resolution(req.accuracy_class);
      plan.epochs.push_back(EpochSpec{1, req.hint("spatial_res").value_or(s), req.hint("temporal_res").value_or(t),
                                      EpochRegion::Full, false, true});
      fine.spatial_res = std::min(fine.spatial_res, plan.epochs[0].spatial_res);
      fine.temporal_res = std::min(fine.temporal_res, plan.epochs[0].temporal_res);
      plan.epochs.push_back(fine);
      break;
    }
    case PlanMode::Progressive:
      if (hinted) {
        plan.epochs.push_back(EpochSpec{1, req.hint("spatial_res").value_or(ladder.coarse_s),
                                        req.hint("temporal_res").value_or(ladder.coarse_t), EpochRegion::Full, false,
                                        true});
        fine.spatial_res = std::min(fine.spatial_res, plan.epochs[0].spatial_res);
        fine.temporal_res = std::min(fine.temporal_res, plan.epochs[0].temporal_res);
      } else {
        plan.epochs.push_back(EpochSpec{1, ladder.coarse_s, ladder.coarse_t, EpochRegion::Full});
        if (refine_threshold) {
          plan.epochs.push_back(EpochSpec{2, ladder.medium_s, ladder.medium_t, EpochRegion::OverThreshold});
        }
      }
      plan.epochs.push_back(fine);
      break;
  }
  check_monotone(plan);
  return plan;
}

void check_monotone(const EpochPlan &plan) {
  const EpochSpec *prev = nullptr;
  for (const auto &e : plan.epochs) {
    if (e.optimize) continue;
    if (prev && (e.spatial_res > prev->spatial_res + 1e-12 || e.temporal_res > prev->temporal_res + 1e-12)) {
      throw Error("InvalidArgument", fmt::format("epoch {} ({}°, {} h) is coarser than epoch {} ({}°, {} h)",
                                                 e.epoch, e.spatial_res, e.temporal_res, prev->epoch,
                                                 prev->spatial_res, prev->temporal_res));
    }
    prev = &e;
  }
}

std::vector<std::pair<int, int>> over_threshold_cells(const gridstore::GridField &field, double threshold) {
  const int ni = field.ni(), nj = field.nj(), nt = field.nt();
  std::vector<std::pair<int, int>> out;
  for (int i = 0; i < ni; ++i) {
    for (int j = 0; j < nj; ++j) {
      for (int t = 0; t < nt; ++t) {
        if (field.at(t, i, j) > threshold) {
          out.emplace_back(i, j);
          break;
        }
      }
    }
  }
  return out;
}

std::vector<gridstore::QRect> refine_region(const gridstore::GridField &field, double threshold) {
  const int ni = field.ni(), nj = field.nj();
  std::vector<char> mark(static_cast<std::size_t>(ni) * nj, 0);
  for (auto [i, j] : over_threshold_cells(field, threshold)) mark[static_cast<std::size_t>(i) * nj + j] = 1;
  // row runs, then merge identical runs of consecutive rows
  std::vector<gridstore::QRect> rects;
  for (int i = 0; i < ni; ++i) {
    for (int j = 0; j < nj;) {
      if (!mark[static_cast<std::size_t>(i) * nj + j]) {
        ++j;
        continue;
      }
      int k = j;
      while (k < nj && mark[static_cast<std::size_t>(i) * nj + k]) ++k;
      auto lo = field.cell_rect(i, j), hi = field.cell_rect(i, k - 1);
      rects.push_back(gridstore::QRect{lo.i0, lo.i1, lo.j0, hi.j1});
      j = k;
    }
  }
  return gridstore::union_rects(rects);
}

}  // namespace genie::planner
