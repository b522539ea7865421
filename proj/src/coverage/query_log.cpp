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

#include "genie/coverage/query_log.h"

#include <fstream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "genie/error.h"

namespace genie::coverage {

std::string fnv1a_hex(const std::string &text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return fmt::format("{:016x}", h);
}

std::string to_json_line(const QueryLogRecord &r) {
  nlohmann::json boxes = nlohmann::json::array();
  for (const auto &b : r.extent) boxes.push_back({b.lat_min, b.lat_max, b.lon_min, b.lon_max});
  nlohmann::json j = {{"timestamp", r.timestamp},
                      {"hash", r.query_hash},
                      {"text", r.text},
                      {"label", r.label},
                      {"extent", boxes},
                      {"interval", {r.interval.start, r.interval.end}},
                      {"params", r.params},
                      {"epoch_latencies_s", r.epoch_latencies_s},
                      {"invocations", r.invocations},
                      {"sim_seconds", r.sim_seconds},
                      {"wall_seconds", r.wall_seconds},
                      {"bytes", r.bytes}};
  return j.dump();
}

QueryLogRecord from_json_line(const std::string &line) {
  QueryLogRecord r;
  try {
    auto j = nlohmann::json::parse(line);
    r.timestamp = j.at("timestamp").get<std::int64_t>();
    r.query_hash = j.at("hash").get<std::string>();
    r.text = j.at("text").get<std::string>();
    r.label = j.value("label", "");
    for (const auto &b : j.at("extent")) {
      r.extent.push_back({b.at(0).get<double>(), b.at(1).get<double>(), b.at(2).get<double>(), b.at(3).get<double>()});
    }
    r.interval = {j.at("interval").at(0).get<std::int64_t>(), j.at("interval").at(1).get<std::int64_t>()};
    r.params = j.at("params").get<std::map<std::string, std::map<std::string, double>>>();
    r.epoch_latencies_s = j.at("epoch_latencies_s").get<std::vector<double>>();
    r.invocations = j.at("invocations").get<std::size_t>();
    r.sim_seconds = j.at("sim_seconds").get<double>();
    r.wall_seconds = j.at("wall_seconds").get<double>();
    r.bytes = j.at("bytes").get<std::size_t>();
  } catch (const nlohmann::json::exception &e) {
    throw Error("ParseError", fmt::format("query log: {}", e.what()));
  }
  return r;
}

LogTotals totals(const std::vector<QueryLogRecord> &records, const std::string &label) {
  LogTotals t;
  double latency = 0.0;
  for (const auto &r : records) {
    if (!label.empty() && r.label != label) continue;
    ++t.queries;
    t.invocations += r.invocations;
    t.sim_seconds += r.sim_seconds;
    t.wall_seconds += r.wall_seconds;
    t.bytes += r.bytes;
    if (!r.epoch_latencies_s.empty()) latency += r.epoch_latencies_s.back();
  }
  if (t.queries) t.mean_latency_s = latency / static_cast<double>(t.queries);
  return t;
}

QueryLog::QueryLog(std::optional<std::filesystem::path> file) : file_(std::move(file)) {
  if (file_ && std::filesystem::exists(*file_)) records_ = replay(*file_);
}

void QueryLog::append(const QueryLogRecord &record) {
  std::lock_guard lock(mu_);
  records_.push_back(record);
  if (!file_) return;
  std::ofstream out(*file_, std::ios::app);
  out << to_json_line(record) << '\n';
  out.flush();
  if (!out) throw Error("IOError", fmt::format("cannot append to query log {}", file_->string()));
}

std::vector<QueryLogRecord> QueryLog::records() const {
  std::lock_guard lock(mu_);
  return records_;
}

std::vector<QueryLogRecord> QueryLog::replay(const std::filesystem::path &file) {
  std::ifstream in(file);
  if (!in) throw Error("IOError", fmt::format("cannot read query log {}", file.string()));
  std::vector<QueryLogRecord> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    out.push_back(from_json_line(line));
  }
  return out;
}

}  // namespace genie::coverage
