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

#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "genie/catalog/catalog.h"
#include "genie/coverage/coverage.h"
#include "genie/coverage/query_log.h"
#include "genie/engine/config.h"
#include "genie/engine/evaluator.h"
#include "genie/gridstore/store.h"
#include "genie/planner/epochs.h"
#include "genie/planner/plan.h"
#include "genie/simkit/adapter.h"

namespace genie::engine {

inline constexpr const char *kVersion = "0.1.0";

/// One delivered epoch of a SELECT.
struct EpochResult {
  int epoch = 1;
  ResultSet rows;
  double latency_s = 0.0;  // since the statement started
  std::size_t invocations = 0;
  std::map<std::string, std::size_t> invocations_by_simulator;
  double covered_fraction = 0.0;  // requested cells already covered at planning time
  double sim_seconds = 0.0;       // model estimate of the runs
  double run_wall_s = 0.0;        // measured simulator time
  std::size_t bytes = 0;
  double estimated_accuracy = 1.0;
  std::string mode;
  std::vector<gridstore::QRect> region;  // cells this epoch was restricted to, if any
  std::map<std::string, std::pair<int, std::int64_t>> answer_grid;  // table -> (quanta, seconds)
  nlohmann::json plan;
  nlohmann::json to_json(const gridstore::Domain &domain) const;
};

struct StatementResult {
  qlang::StatementKind kind = qlang::StatementKind::Select;
  std::string message;
  std::vector<EpochResult> epochs;
};

/// What refine requests need to know about a client's last query.
struct Session {
  std::string id;
  std::optional<std::string> last_query;
  int last_epoch = 0;
};

struct RunOptions {
  std::optional<planner::PlanMode> mode;
  std::string label;  // copied to the query log
};

using EpochSink = std::function<void(const EpochResult &)>;

/// Statement execution over one catalog, store, coverage map and query log.
/// Public operations are serialized by an engine-wide lock.
class Engine {
 public:
  explicit Engine(EngineConfig config);

  const EngineConfig &config() const { return config_; }
  const gridstore::Domain &domain() const { return domain_; }
  catalog::Catalog &catalog() { return *catalog_; }
  gridstore::Store &store() { return *store_; }
  coverage::CoverageMap &coverage() { return *coverage_; }
  coverage::QueryLog &log() { return *log_; }
  const simkit::AdapterRegistry &adapters() const { return adapters_; }
  simkit::SimContext &sim() { return sim_; }
  void set_mode(planner::PlanMode mode) { config_.mode = mode; }
  void set_seed(std::uint64_t seed) { config_.seed = seed; }

  /// One statement. DDL applies synchronously; a SELECT streams each
  /// epoch to `sink` as it completes and returns them all.
  StatementResult execute(const std::string &text, Session &session, const EpochSink &sink = {},
                          const RunOptions &options = {});
  std::vector<StatementResult> run_script(const std::string &text, Session &session, const EpochSink &sink = {},
                                          const RunOptions &options = {});
  /// Re-runs the session's last query with its generation restricted to
  /// `region` at the hinted (or fine ladder) resolution, as epoch 3.
  /// Errors: NoPriorQuery, ConflictingHints.
  std::vector<EpochResult> refine(Session &session, const gridstore::BBox &region, const std::string &hint,
                                  const EpochSink &sink = {});
  /// Coarsest-ladder tiles over the domain, row-major per virtual column in
  /// dependency order, until the next tile's estimate exceeds the budget.
  std::vector<coverage::CoverageEntry> warm_start(double budget_s);
  /// Plans of the scheduled epochs, without running anything.
  std::string explain(const std::string &query, std::optional<planner::PlanMode> mode = std::nullopt);
  /// The query over data already materialized, every virtual table read
  /// on the (sres, tres) grid. Nothing is generated.
  ResultSet evaluate_at(const std::string &query, int sres, std::int64_t tres);
  /// Forgets every materialized field and coverage entry.
  void reset_state();
  std::uint64_t invocation_count() const { return next_invocation_ - 1; }

 private:
  struct Query;
  struct RunStats;
  struct Answer;

  StatementResult execute_statement(const qlang::Statement &stmt, const std::string &text, Session &session,
                                    const EpochSink &sink, const RunOptions &options);
  std::vector<EpochResult> run_select(const qlang::SelectQuery &query, const std::string &text, Session &session,
                                      const EpochSink &sink, const RunOptions &options,
                                      const std::optional<gridstore::BBox> &refine_region = std::nullopt);
  planner::ParameterAssignment assign(const Query &q, const planner::EpochSpec &spec,
                                      const planner::RequirementSpec &req);
  void run_plan(const planner::ExecutionPlan &plan, RunStats &stats);
  Answer answer(const Query &q, const planner::RequirementSpec &req, const planner::ExecutionPlan &plan);
  Answer answer_on_grid(const Query &q, const planner::RequirementSpec &req,
                        const std::map<gridstore::Attribute, std::pair<int, std::int64_t>> &grids);
  void refresh_ignitions();
  void load_data();
  std::string signature(const std::string &simulator, const simkit::ParamMap &params) const;

  EngineConfig config_;
  gridstore::Domain domain_;
  simkit::AdapterRegistry adapters_;
  std::unique_ptr<catalog::Catalog> catalog_;
  std::unique_ptr<gridstore::Store> store_;
  std::unique_ptr<coverage::CoverageMap> coverage_;
  std::unique_ptr<coverage::QueryLog> log_;
  simkit::SimContext sim_;
  std::uint64_t next_invocation_ = 1;
  std::mutex mu_;
};

}  // namespace genie::engine
