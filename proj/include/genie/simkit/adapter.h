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
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "genie/catalog/catalog.h"
#include "genie/gridstore/grid_field.h"
#include "genie/simkit/cost_model.h"
#include "genie/simkit/fire.h"
#include "genie/simkit/plume.h"
#include "genie/simkit/scenario.h"

namespace genie::simkit {

using ParamMap = std::map<std::string, double>;

/// Shared inputs of every run.
struct SimContext {
  gridstore::Domain domain;
  WindField wind;
  std::vector<Ignition> ignitions;
  FireConfig fire;
  PlumeConfig plume;
  CostModel cost;
  bool parallel = true;
};

struct SimRequest {
  std::string simulator;  // registration name
  gridstore::Attribute attribute;
  std::vector<gridstore::Extent> extents;  // aligned to the output grid
  ParamMap params;  // spatial_res in degrees, temporal_res in hours, ...
  std::map<gridstore::Attribute, const gridstore::GridField *> inputs;
  std::uint64_t seed = 0;

  int sres() const;
  std::int64_t tres() const;
  double param(const std::string &name, double fallback) const;
};

struct SimResult {
  std::vector<gridstore::GridField> fields;  // one per request extent
  std::string config_text;
  double wall_s = 0.0;
  std::vector<MassLedger> ledger;
  std::uint64_t work = 0;  // particle steps or rasterized cells
};

/// An upstream attribute the run consumes, on the upstream grid.
struct InputNeed {
  gridstore::Attribute attribute;
  gridstore::Extent extent;
};

class Adapter {
 public:
  virtual ~Adapter() = default;

  virtual std::string id() const = 0;
  virtual std::vector<catalog::ParameterSpec> parameters() const = 0;
  /// Native configuration text for the request (the simulator's control file).
  virtual std::string translate(const SimRequest &req) const = 0;
  /// Errors: UnknownCandidate.
  virtual Estimate estimate(const gridstore::Domain &domain, const ParamMap &params,
                            const std::vector<gridstore::Extent> &extents, const CostModel &cost) const = 0;
  /// Extent of upstream data needed; `input_grid` gives its (sres, tres).
  virtual std::optional<gridstore::Extent> input_extent(const gridstore::Domain &domain, const SimRequest &req,
                                                        const SimContext &ctx) const {
    (void)domain, (void)req, (void)ctx;
    return std::nullopt;
  }
  /// Errors: MissingInput, MissingIgnitionFields, InvalidArgument.
  virtual SimResult execute(const SimRequest &req, const SimContext &ctx) const = 0;
};

class PlumeAdapter final : public Adapter {
 public:
  std::string id() const override { return "plume"; }
  std::vector<catalog::ParameterSpec> parameters() const override;
  std::string translate(const SimRequest &req) const override;
  Estimate estimate(const gridstore::Domain &domain, const ParamMap &params,
                    const std::vector<gridstore::Extent> &extents, const CostModel &cost) const override;
  std::optional<gridstore::Extent> input_extent(const gridstore::Domain &domain, const SimRequest &req,
                                                const SimContext &ctx) const override;
  SimResult execute(const SimRequest &req, const SimContext &ctx) const override;
};

class FireAdapter final : public Adapter {
 public:
  std::string id() const override { return "fire"; }
  std::vector<catalog::ParameterSpec> parameters() const override;
  std::string translate(const SimRequest &req) const override;
  Estimate estimate(const gridstore::Domain &domain, const ParamMap &params,
                    const std::vector<gridstore::Extent> &extents, const CostModel &cost) const override;
  SimResult execute(const SimRequest &req, const SimContext &ctx) const override;
};

class AdapterRegistry {
 public:
  /// Registry with the plume and fire adapters and their aliases
  /// (hysplit, wrf_sfire, wrf-sfire).
  static AdapterRegistry builtin();

  void add(std::shared_ptr<const Adapter> adapter);
  void alias(const std::string &name, const std::string &adapter_id);
  const Adapter *find(const std::string &adapter_id) const;
  const Adapter &get(const std::string &adapter_id) const;  // Errors: UnknownAdapter

  /// Adapter for an executable reference ("builtin:<id>" or a path whose
  /// stem is a known id or alias), falling back to the simulator name.
  std::optional<catalog::AdapterDescriptor> resolve(const std::string &executable_ref, const std::string &name) const;
  catalog::AdapterResolver resolver() const;

 private:
  std::map<std::string, std::shared_ptr<const Adapter>> adapters_;
  std::map<std::string, std::string> aliases_;
};

/// Default spatial (degrees) and temporal (hours) ladders, coarse to fine.
const std::vector<double> &spatial_ladder();
const std::vector<double> &temporal_ladder();
const std::vector<double> &particle_ladder();

}  // namespace genie::simkit
