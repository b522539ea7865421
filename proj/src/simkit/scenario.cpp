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

#include "genie/simkit/scenario.h"

#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "genie/error.h"

namespace genie::simkit {

WindField WindField::uniform(double u, double v) { return series({{u, v}}); }

WindField WindField::series(std::vector<std::pair<double, double>> uv, std::int64_t interval_s, std::int64_t origin) {
  if (uv.empty()) throw Error("InvalidWind", "wind series is empty");
  if (interval_s <= 0) throw Error("InvalidWind", "wind interval must be positive");
  for (const auto &[u, v] : uv) {
    if (!std::isfinite(u) || !std::isfinite(v) || std::hypot(u, v) > kMaxWindSpeed) {
      throw Error("InvalidWind", fmt::format("wind ({}, {}) m/s is not finite or exceeds {} m/s", u, v, kMaxWindSpeed));
    }
  }
  WindField w;
  w.uv_ = std::move(uv);
  w.interval_ = interval_s;
  w.origin_ = origin;
  return w;
}

std::pair<double, double> WindField::at(double t) const {
  auto k = static_cast<std::int64_t>(std::floor((t - static_cast<double>(origin_)) / static_cast<double>(interval_)));
  k = std::clamp<std::int64_t>(k, 0, static_cast<std::int64_t>(uv_.size()) - 1);
  return uv_[static_cast<std::size_t>(k)];
}

std::pair<double, double> WindField::displacement(double ta, double tb) const {
  double dx = 0.0, dy = 0.0, t = ta;
  const double step = static_cast<double>(interval_), o = static_cast<double>(origin_);
  while (t < tb) {
    double k = std::floor((t - o) / step);
    double end = std::min(tb, o + (k + 1.0) * step);
    if (end <= t) end = tb;  // guards against rounding at a boundary
    auto [u, v] = at(t);
    dx += u * (end - t);
    dy += v * (end - t);
    t = end;
  }
  return {dx, dy};
}

WindField parse_wind_csv(const std::string &text, const gridstore::Domain &domain) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw Error("ParseError", "wind file is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  auto header = gridstore::split_csv_line(line);
  int ct = -1, cu = -1, cv = -1;
  for (int k = 0; k < static_cast<int>(header.size()); ++k) {
    if (header[k] == "time") ct = k;
    if (header[k] == "u") cu = k;
    if (header[k] == "v") cv = k;
  }
  if (ct < 0 || cu < 0 || cv < 0) throw Error("ParseError", "wind header must contain time, u and v");
  std::vector<std::int64_t> times;
  std::vector<std::pair<double, double>> uv;
  int row = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    ++row;
    auto cells = gridstore::split_csv_line(line);
    auto need = static_cast<std::size_t>(std::max({ct, cu, cv}));
    if (cells.size() <= need) throw Error("ParseError", fmt::format("wind row {}: too few fields", row));
    try {
      times.push_back(gridstore::parse_timestamp(cells[ct]));
      uv.emplace_back(std::stod(cells[cu]), std::stod(cells[cv]));
    } catch (const Error &) {
      throw;
    } catch (const std::exception &) {
      throw Error("ParseError", fmt::format("wind row {}: bad number", row));
    }
  }
  if (times.empty()) throw Error("ParseError", "wind file has no rows");
  std::int64_t step = times.size() > 1 ? times[1] - times[0] : 3600;
  if (step <= 0) throw Error("ParseError", "wind rows must be in increasing time order");
  for (std::size_t k = 1; k < times.size(); ++k) {
    if (times[k] - times[k - 1] != step) {
      throw Error("ParseError", fmt::format("wind row {}: rows must be evenly spaced", k + 1));
    }
  }
  return WindField::series(std::move(uv), step, domain.rel(times.front()));
}

WindField load_wind_csv(const std::filesystem::path &file, const gridstore::Domain &domain) {
  std::ifstream in(file);
  if (!in) throw Error("IOError", fmt::format("cannot read wind file {}", file.string()));
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_wind_csv(ss.str(), domain);
}

std::vector<Ignition> ignitions_from_table(const gridstore::StoredTable &table, const gridstore::Domain &domain) {
  auto col = [&](const char *name) {
    auto c = table.column_index(name);
    if (!c) throw Error("MissingIgnitionFields", fmt::format("table '{}' has no column '{}'", table.name(), name));
    return *c;
  };
  const std::size_t cid = col("fire_id"), cloc = col("location"), cstart = col("start_time"), cdur = col("duration"),
                    cint = col("fire_intensity");
  std::vector<Ignition> out;
  for (std::size_t r = 0; r < table.row_count(); ++r) {
    const auto &row = table.row(r);
    const auto *p = std::get_if<gridstore::GeoPoint>(&row[cloc]);
    auto id = gridstore::value_number(row[cid]);
    auto start = gridstore::value_number(row[cstart]);
    auto dur = gridstore::value_number(row[cdur]);
    auto inten = gridstore::value_number(row[cint]);
    if (!p || !id || !start || !dur || !inten) {
      throw Error("MissingIgnitionFields", fmt::format("ignition row {} lacks location, start_time, duration or "
                                                       "fire_intensity",
                                                       r + 1));
    }
    Ignition ig;
    ig.fire_id = static_cast<std::int64_t>(*id);
    ig.lat = p->lat;
    ig.lon = p->lon;
    ig.start = domain.rel(static_cast<std::int64_t>(*start));
    ig.duration_h = *dur;
    ig.intensity = *inten;
    out.push_back(ig);
  }
  return out;
}

}  // namespace genie::simkit
