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

#include "genie/planner/plan.h"

#include <algorithm>

#include <fmt/format.h>

#include "genie/error.h"

namespace genie::planner {

namespace {

class Planner {
 public:
  Planner(const ParameterAssignment &assignment, const PlanInputs &in, int epoch)
      : assignment_(assignment), in_(in), epoch_(epoch) {}

  void attribute(const GridTarget &target) {
    auto def = in_.catalog.virtual_column(target.attribute);
    if (!def) throw Error("NotVirtual", fmt::format("'{}' is not a virtual column", target.attribute.str()));

    auto gaps = in_.coverage.find_gaps(target.request(), pending_);
    if (gaps.empty()) {
      if (finer_data(target)) {
        PlanStep s;
        s.kind = StepKind::Aggregate;
        s.attribute = target.attribute;
        s.sres = target.sres;
        s.tres = target.tres;
        s.extents = target.extents();
        steps_.push_back(std::move(s));
      }
      return;
    }

    auto nodes = in_.catalog.topo_order(target.attribute);
    const auto &sims = nodes.back().simulators;
    if (sims.empty()) throw Error("UnknownSimulator", fmt::format("'{}' has no simulator", target.attribute.str()));

    struct Member {
      const catalog::SimulatorRegistration *reg;
      const simkit::Adapter *adapter;
      simkit::ParamMap params;
      simkit::Estimate estimate;
    };
    std::vector<Member> members;
    for (const auto &reg : sims) {
      Member m{&reg, &in_.adapters.get(reg.adapter_id), assignment_.of(reg.name), {}};
      m.params["spatial_res"] = gridstore::quanta_degrees(target.sres);
      m.params["temporal_res"] = gridstore::seconds_hours(target.tres);
      m.estimate = m.adapter->estimate(in_.sim.domain, m.params, gaps.gaps, in_.sim.cost);
      members.push_back(std::move(m));
    }
    bool ensemble = members.size() > 1 && def->ensemble_method == "weighted_average";
    if (!ensemble && members.size() > 1) {
      std::size_t best = 0;
      for (std::size_t k = 1; k < members.size(); ++k) {
        if (members[k].estimate.seconds < members[best].estimate.seconds) best = k;
      }
      members = {members[best]};
    }

    // upstream data first, over what the first member needs
    std::vector<Attribute> inputs;
    for (const auto &dep : def->depends_on) {
      simkit::SimRequest probe;
      probe.simulator = members.front().reg->name;
      probe.attribute = target.attribute;
      probe.extents = gaps.gaps;
      probe.params = members.front().params;
      auto ext = members.front().adapter->input_extent(in_.sim.domain, probe, in_.sim);
      if (!ext || ext->empty()) continue;
      GridTarget up;
      up.attribute = dep;
      up.rects = {ext->rect};
      up.t0 = ext->t0;
      up.t1 = ext->t1;
      up.sres = target.sres;
      up.tres = std::max(target.tres, kUpstreamMinTres);
      attribute(up);
      inputs.push_back(dep);
    }

    for (auto &m : members) {
      PlanStep s;
      s.kind = StepKind::Generate;
      s.attribute = target.attribute;
      s.sres = target.sres;
      s.tres = target.tres;
      s.extents = gaps.gaps;
      s.simulator = m.reg->name;
      s.params = std::move(m.params);
      s.inputs = inputs;
      s.member = ensemble;
      s.estimate = m.estimate;
      steps_.push_back(std::move(s));
    }
    if (ensemble) {
      PlanStep s;
      s.kind = StepKind::Ensemble;
      s.attribute = target.attribute;
      s.sres = target.sres;
      s.tres = target.tres;
      s.extents = gaps.gaps;
      for (const auto &reg : sims) {
        s.members.push_back(reg.name);
        s.weights.push_back(reg.quality_score);
      }
      steps_.push_back(std::move(s));
    }
    for (const auto &g : gaps.gaps) {
      coverage::CoverageEntry e;
      e.attribute = target.attribute;
      e.extent = g;
      e.sres = target.sres;
      e.tres = target.tres;
      e.epoch = epoch_;
      pending_.push_back(std::move(e));
    }
  }

  std::vector<PlanStep> take() { return std::move(steps_); }

 private:
  bool finer_data(const GridTarget &t) const {
    for (const auto &e : in_.coverage.entries(t.attribute)) {
      if (!coverage::satisfies(e, t.sres, t.tres)) continue;
      if (e.sres == t.sres && e.tres == t.tres) continue;
      for (const auto &r : t.rects) {
        if (e.extent.rect.overlaps(r) && e.extent.t0 < t.t1 && t.t0 < e.extent.t1) return true;
      }
    }
    return false;
  }

  const ParameterAssignment &assignment_;
  const PlanInputs &in_;
  int epoch_;
  std::vector<PlanStep> steps_;
  std::vector<coverage::CoverageEntry> pending_;
};

nlohmann::json extent_json(const gridstore::Domain &d, const Extent &e) {
  auto b = d.to_bbox(e.rect);
  return {{"bbox", {b.lat_min, b.lat_max, b.lon_min, b.lon_max}},
          {"start", gridstore::format_timestamp(d.abs(e.t0))},
          {"end", gridstore::format_timestamp(d.abs(e.t1))}};
}

std::size_t cells_of(const std::vector<Extent> &extents, int sres, std::int64_t tres) {
  std::size_t n = 0;
  for (const auto &e : extents) {
    std::size_t ni = (e.rect.i1 - e.rect.i0 + sres - 1) / sres;
    std::size_t nj = (e.rect.j1 - e.rect.j0 + sres - 1) / sres;
    std::size_t nt = (e.t1 - e.t0 + tres - 1) / tres;
    n += ni * nj * nt;
  }
  return n;
}

}  // namespace

const char *step_name(StepKind k) {
  switch (k) {
    case StepKind::Generate: return "Generate";
    case StepKind::Aggregate: return "Aggregate";
    case StepKind::Ensemble: return "Ensemble";
    case StepKind::Answer: return "Answer";
  }
  return "?";
}

coverage::GridRequest GridTarget::request() const {
  coverage::GridRequest r;
  r.attribute = attribute;
  r.rects = rects;
  r.t0 = t0;
  r.t1 = t1;
  r.sres = sres;
  r.tres = tres;
  return r;
}

std::vector<Extent> GridTarget::extents() const {
  std::vector<Extent> out;
  for (const auto &r : rects) out.push_back(Extent{r, t0, t1});
  return out;
}

GridTarget target_of(const RequirementSpec &req, const gridstore::Domain &domain, const Attribute &attr, int sres,
                     std::int64_t tres, const std::vector<QRect> *clip) {
  GridTarget t;
  t.attribute = attr;
  t.sres = sres;
  t.tres = tres;
  std::vector<QRect> rects;
  for (const auto &b : req.extent) {
    QRect r = domain.to_rect(b);
    if (r.empty()) continue;
    if (clip) {
      for (const auto &c : *clip) {
        QRect x = r.intersect(c);
        if (!x.empty()) rects.push_back(x);
      }
    } else {
      rects.push_back(r);
    }
  }
  t.rects = gridstore::union_rects(rects);
  std::int64_t lo = std::max<std::int64_t>(0, domain.rel(req.interval.start));
  std::int64_t hi = std::min(domain.duration(), domain.rel(req.interval.end) + 1);
  t.t0 = lo;
  t.t1 = std::max(lo, hi);
  if (t.t0 >= t.t1) t.rects.clear();
  return t;
}

ExecutionPlan build_plan(const RequirementSpec &req, const ParameterAssignment &assignment, const PlanInputs &in,
                         int epoch, const std::vector<QRect> *clip) {
  ExecutionPlan plan;
  plan.epoch = epoch;
  Planner p(assignment, in, epoch);
  for (const auto &attr : req.attributes) {
    auto nodes = in.catalog.topo_order(attr);
    const auto &sims = nodes.back().simulators;
    double s = assignment.spatial_res, t = assignment.temporal_res;
    if (!sims.empty()) {
      const auto &params = assignment.of(sims.front().name);
      if (auto it = params.find("spatial_res"); it != params.end()) s = it->second;
      if (auto it = params.find("temporal_res"); it != params.end()) t = it->second;
    }
    GridTarget target = target_of(req, in.sim.domain, attr, gridstore::resolution_quanta(s),
                                  gridstore::resolution_seconds(t), clip);
    plan.targets.push_back(target);
    if (!target.rects.empty()) p.attribute(target);
  }
  plan.steps = p.take();
  PlanStep answer;
  answer.kind = StepKind::Answer;
  for (const auto &t : plan.targets) {
    for (const auto &e : t.extents()) answer.extents.push_back(e);
  }
  plan.steps.push_back(std::move(answer));
  return plan;
}

std::size_t ExecutionPlan::generate_count() const {
  return std::count_if(steps.begin(), steps.end(), [](const PlanStep &s) { return s.kind == StepKind::Generate; });
}

double ExecutionPlan::estimated_seconds() const {
  double t = 0.0;
  for (const auto &s : steps) {
    if (s.kind == StepKind::Generate) t += s.estimate.seconds;
  }
  return t;
}

double ExecutionPlan::estimated_accuracy() const {
  double a = 1.0;
  for (const auto &s : steps) {
    if (s.kind == StepKind::Generate) a = std::min(a, s.estimate.accuracy);
  }
  return a;
}

nlohmann::json ExecutionPlan::to_json(const gridstore::Domain &domain) const {
  nlohmann::json steps_json = nlohmann::json::array();
  for (const auto &s : steps) {
    nlohmann::json j{{"kind", step_name(s.kind)}};
    if (s.kind != StepKind::Answer) {
      j["attribute"] = s.attribute.str();
      j["spatial_res"] = gridstore::quanta_degrees(s.sres);
      j["temporal_res"] = gridstore::seconds_hours(s.tres);
      j["cells"] = cells_of(s.extents, s.sres, s.tres);
    }
    nlohmann::json ex = nlohmann::json::array();
    for (const auto &e : s.extents) ex.push_back(extent_json(domain, e));
    j["extents"] = ex;
    if (s.kind == StepKind::Generate) {
      j["simulator"] = s.simulator;
      j["params"] = s.params;
      nlohmann::json inputs = nlohmann::json::array();
      for (const auto &a : s.inputs) inputs.push_back(a.str());
      j["inputs"] = inputs;
      j["estimate"] = {{"seconds", s.estimate.seconds}, {"accuracy", s.estimate.accuracy}};
      if (s.member) j["member"] = true;
    }
    if (s.kind == StepKind::Ensemble) {
      j["members"] = s.members;
      j["weights"] = s.weights;
    }
    steps_json.push_back(std::move(j));
  }
  return {{"epoch", epoch},
          {"steps", steps_json},
          {"estimated_seconds", estimated_seconds()},
          {"estimated_accuracy", estimated_accuracy()}};
}

std::string ExecutionPlan::explain(const gridstore::Domain &domain) const {
  std::string out = fmt::format("epoch {}: {} steps, est {:.1f} s, est accuracy {:.3f}\n", epoch, steps.size(),
                                estimated_seconds(), estimated_accuracy());
  int n = 0;
  for (const auto &s : steps) {
    out += fmt::format("  {}. {}", ++n, step_name(s.kind));
    if (s.kind == StepKind::Answer) {
      out += fmt::format(" over {} extents\n", s.extents.size());
      continue;
    }
    out += fmt::format(" {} at {}° / {} h", s.attribute.str(), gridstore::quanta_degrees(s.sres),
                       gridstore::seconds_hours(s.tres));
    if (s.kind == StepKind::Generate) {
      out += fmt::format(" by {} (", s.simulator);
      bool first = true;
      for (const auto &[k, v] : s.params) {
        out += fmt::format("{}{}={}", first ? "" : ", ", k, v);
        first = false;
      }
      out += fmt::format("), est {:.1f} s, A {:.3f}", s.estimate.seconds, s.estimate.accuracy);
    }
    out += fmt::format(", {} cells\n", cells_of(s.extents, s.sres, s.tres));
    for (const auto &e : s.extents) {
      auto b = domain.to_bbox(e.rect);
      out += fmt::format("       [{:.2f}, {:.2f}] x [{:.2f}, {:.2f}] {} .. {}\n", b.lat_min, b.lat_max, b.lon_min,
                         b.lon_max, gridstore::format_timestamp(domain.abs(e.t0)),
                         gridstore::format_timestamp(domain.abs(e.t1)));
    }
  }
  return out;
}

}  // namespace genie::planner
