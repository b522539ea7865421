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

#include "genie/simkit/adapter.h"

#include <algorithm>
#include <chrono>
#include <filesystem>

#include <fmt/format.h>

#include "genie/error.h"

namespace genie::simkit {

namespace {

catalog::ParameterSpec spec(const char *name, qlang::TypeTag type, std::optional<double> def,
                            std::vector<double> candidates, bool derived = false) {
  catalog::ParameterSpec s;
  s.name = name;
  s.type = type;
  s.default_value = def;
  s.candidates = std::move(candidates);
  s.derived = derived;
  return s;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string extent_lines(const gridstore::Domain &d, const std::vector<gridstore::Extent> &extents) {
  std::string out;
  for (const auto &e : extents) {
    auto b = d.to_bbox(e.rect);
    out += fmt::format("extent {:.2f} {:.2f} {:.2f} {:.2f} {} {}\n", b.lat_min, b.lat_max, b.lon_min, b.lon_max,
                       gridstore::format_timestamp(d.abs(e.t0)), gridstore::format_timestamp(d.abs(e.t1)));
  }
  return out;
}

std::string lower(std::string s) {
  for (auto &c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

}  // namespace

const std::vector<double> &spatial_ladder() {
  static const std::vector<double> v{0.5, 0.2, 0.1, 0.05, 0.02, 0.01};
  return v;
}

const std::vector<double> &temporal_ladder() {
  static const std::vector<double> v{6.0, 3.0, 2.0, 1.0, 0.5, 0.25};
  return v;
}

const std::vector<double> &particle_ladder() {
  static const std::vector<double> v{250, 500, 1000, 2000, 4000};
  return v;
}

int SimRequest::sres() const { return gridstore::resolution_quanta(param("spatial_res", 0.1)); }
std::int64_t SimRequest::tres() const { return gridstore::resolution_seconds(param("temporal_res", 1.0)); }

double SimRequest::param(const std::string &name, double fallback) const {
  auto it = params.find(name);
  return it == params.end() ? fallback : it->second;
}

// plume

std::vector<catalog::ParameterSpec> PlumeAdapter::parameters() const {
  using qlang::TypeTag;
  return {spec("spatial_res", TypeTag::Real, 0.1, spatial_ladder()),
          spec("temporal_res", TypeTag::Real, 1.0, temporal_ladder()),
          spec("particle_count", TypeTag::Integer, 1000, particle_ladder()),
          spec("run_duration", TypeTag::Integer, std::nullopt, {}, true)};
}

std::string PlumeAdapter::translate(const SimRequest &req) const {
  // minimal CONTROL-style text; the built-in model reads the request directly
  std::string out = fmt::format("simulator {}\nadapter plume\n", req.simulator);
  out += fmt::format("grid_spacing_deg {}\n", req.param("spatial_res", 0.1));
  out += fmt::format("sampling_hours {}\n", req.param("temporal_res", 1.0));
  out += fmt::format("particle_count {}\n", req.param("particle_count", 1000));
  out += fmt::format("run_duration_h {}\n", req.param("run_duration", 0));
  out += fmt::format("seed {}\n", req.seed);
  return out;
}

Estimate PlumeAdapter::estimate(const gridstore::Domain &domain, const ParamMap &params,
                                const std::vector<gridstore::Extent> &extents, const CostModel &cost) const {
  auto get = [&](const char *k, double d) {
    auto it = params.find(k);
    return it == params.end() ? d : it->second;
  };
  return cost.plume(domain, extents, get("spatial_res", 0.1), get("temporal_res", 1.0), get("particle_count", 1000));
}

std::optional<gridstore::Extent> PlumeAdapter::input_extent(const gridstore::Domain &domain, const SimRequest &req,
                                                            const SimContext &ctx) const {
  if (req.extents.empty()) return std::nullopt;
  std::int64_t t1 = 0;
  for (const auto &e : req.extents) t1 = std::max(t1, e.t1);
  // particles travel across the whole domain, so sources anywhere matter
  return gridstore::Extent{domain.full_rect(), plume_spinup_start(req.extents, req.tres(), ctx.plume), t1};
}

SimResult PlumeAdapter::execute(const SimRequest &req, const SimContext &ctx) const {
  auto t0 = std::chrono::steady_clock::now();
  PlumeSource src;
  for (const auto &[attr, field] : req.inputs) {
    if (field) src.emissions = field;
  }
  if (!src.emissions) throw Error("MissingInput", fmt::format("simulator '{}' needs an emission field", req.simulator));
  const double s = req.param("spatial_res", 0.1);
  const double pph = req.param("particle_count", 1000) * ctx.cost.particle_multiplier(s);
  auto run = plume_simulate(ctx.domain, req.attribute, req.extents, req.sres(), req.tres(), pph, src, ctx.wind,
                            ctx.plume, req.seed, ctx.parallel);
  SimResult r;
  r.fields = std::move(run.fields);
  r.ledger = std::move(run.ledger);
  r.work = run.particle_steps;
  r.config_text = translate(req) + extent_lines(ctx.domain, req.extents);
  r.wall_s = seconds_since(t0);
  return r;
}

// fire

std::vector<catalog::ParameterSpec> FireAdapter::parameters() const {
  using qlang::TypeTag;
  return {spec("spatial_res", TypeTag::Real, 0.1, spatial_ladder()),
          spec("temporal_res", TypeTag::Real, 1.0, temporal_ladder())};
}

std::string FireAdapter::translate(const SimRequest &req) const {
  // namelist-style text
  std::string out = "&domain\n";
  out += fmt::format(" dx_deg = {},\n dt_hours = {},\n", req.param("spatial_res", 0.1), req.param("temporal_res", 1.0));
  out += "/\n";
  return out;
}

Estimate FireAdapter::estimate(const gridstore::Domain &domain, const ParamMap &params,
                               const std::vector<gridstore::Extent> &extents, const CostModel &cost) const {
  auto get = [&](const char *k, double d) {
    auto it = params.find(k);
    return it == params.end() ? d : it->second;
  };
  return cost.fire(domain, extents, get("spatial_res", 0.1), get("temporal_res", 1.0));
}

SimResult FireAdapter::execute(const SimRequest &req, const SimContext &ctx) const {
  auto t0 = std::chrono::steady_clock::now();
  SimResult r;
  r.fields = fire_simulate(ctx.domain, req.attribute, req.extents, req.sres(), req.tres(), ctx.ignitions, ctx.wind,
                           ctx.fire, ctx.parallel);
  for (const auto &f : r.fields) r.work += f.cell_count();
  r.config_text = translate(req) + extent_lines(ctx.domain, req.extents);
  r.wall_s = seconds_since(t0);
  return r;
}

// registry

AdapterRegistry AdapterRegistry::builtin() {
  AdapterRegistry r;
  r.add(std::make_shared<PlumeAdapter>());
  r.add(std::make_shared<FireAdapter>());
  r.alias("hysplit", "plume");
  r.alias("wrf_sfire", "fire");
  r.alias("wrf-sfire", "fire");
  r.alias("wrfsfire", "fire");
  return r;
}

void AdapterRegistry::add(std::shared_ptr<const Adapter> adapter) {
  auto id = adapter->id();
  adapters_[id] = std::move(adapter);
}

void AdapterRegistry::alias(const std::string &name, const std::string &adapter_id) {
  aliases_[lower(name)] = adapter_id;
}

const Adapter *AdapterRegistry::find(const std::string &adapter_id) const {
  auto it = adapters_.find(adapter_id);
  return it == adapters_.end() ? nullptr : it->second.get();
}

const Adapter &AdapterRegistry::get(const std::string &adapter_id) const {
  const Adapter *a = find(adapter_id);
  if (!a) throw Error("UnknownAdapter", fmt::format("no adapter '{}'", adapter_id));
  return *a;
}

std::optional<catalog::AdapterDescriptor> AdapterRegistry::resolve(const std::string &executable_ref,
                                                                   const std::string &name) const {
  auto lookup = [&](std::string key) -> const Adapter * {
    key = lower(key);
    if (auto it = aliases_.find(key); it != aliases_.end()) key = it->second;
    return find(key);
  };
  const Adapter *a = nullptr;
  if (executable_ref.rfind("builtin:", 0) == 0) {
    a = lookup(executable_ref.substr(8));
  } else {
    a = lookup(std::filesystem::path(executable_ref).stem().string());
  }
  if (!a) a = lookup(name);
  if (!a) return std::nullopt;
  return catalog::AdapterDescriptor{a->id(), a->parameters()};
}

catalog::AdapterResolver AdapterRegistry::resolver() const {
  auto self = std::make_shared<AdapterRegistry>(*this);
  return [self](const std::string &ref, const std::string &name) { return self->resolve(ref, name); };
}

}  // namespace genie::simkit
