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
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "genie/gridstore/geometry.h"

namespace genie::coverage {

/// One executed query. Serialized as a single JSON object per line.
struct QueryLogRecord {
  std::int64_t timestamp = 0;  // unix seconds
  std::string query_hash;      // FNV-1a 64 of the query text, hex
  std::string text;
  std::string label;  // free-form tag, e.g. the bench mode
  std::vector<gridstore::BBox> extent;
  gridstore::TimeInterval interval;
  std::map<std::string, std::map<std::string, double>> params;  // simulator -> parameter -> value
  std::vector<double> epoch_latencies_s;
  std::size_t invocations = 0;
  double sim_seconds = 0.0;  // model-estimated simulator time
  double wall_seconds = 0.0;
  std::size_t bytes = 0;
};

struct LogTotals {
  std::size_t queries = 0;
  std::size_t invocations = 0;
  double sim_seconds = 0.0;
  double wall_seconds = 0.0;
  std::size_t bytes = 0;
  double mean_latency_s = 0.0;  // mean of each query's last epoch latency
};

std::string fnv1a_hex(const std::string &text);
std::string to_json_line(const QueryLogRecord &r);
QueryLogRecord from_json_line(const std::string &line);
LogTotals totals(const std::vector<QueryLogRecord> &records, const std::string &label = {});

/// Append-only query log. Kept in memory and, when a path is given,
/// mirrored to a JSON-lines file that is flushed after every record.
class QueryLog {
 public:
  explicit QueryLog(std::optional<std::filesystem::path> file = std::nullopt);

  /// Throws Error("IOError") if the file write fails; the in-memory copy
  /// is updated regardless.
  void append(const QueryLogRecord &record);
  std::vector<QueryLogRecord> records() const;
  const std::optional<std::filesystem::path> &file() const { return file_; }

  static std::vector<QueryLogRecord> replay(const std::filesystem::path &file);

 private:
  std::optional<std::filesystem::path> file_;
  std::vector<QueryLogRecord> records_;
  mutable std::mutex mu_;
};

}  // namespace genie::coverage
