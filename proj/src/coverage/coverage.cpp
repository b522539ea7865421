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

#include "genie/coverage/coverage.h"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <mutex>
#include <set>

#include <fmt/format.h>

#include "genie/error.h"

namespace genie::coverage {

namespace {

constexpr const char *kCoverageFormat = "genie-coverage/1";

gridstore::BBox index_box(const QRect &r) {
  return gridstore::BBox{static_cast<double>(r.i0), static_cast<double>(r.i1), static_cast<double>(r.j0),
                         static_cast<double>(r.j1)};
}

bool better(const CoverageEntry *a, const CoverageEntry *b) {
  if (a->sres != b->sres) return a->sres < b->sres;
  if (a->tres != b->tres) return a->tres < b->tres;
  return a->id > b->id;
}

nlohmann::json entry_json(const CoverageEntry &e) {
  return {{"id", e.id},
          {"table", e.attribute.table},
          {"column", e.attribute.column},
          {"extent", {e.extent.rect.i0, e.extent.rect.i1, e.extent.rect.j0, e.extent.rect.j1, e.extent.t0, e.extent.t1}},
          {"sres", e.sres},
          {"tres", e.tres},
          {"signature", e.param_signature},
          {"epoch", e.epoch},
          {"created_at", e.created_at},
          {"runtime_s", e.runtime_s},
          {"invocation", e.invocation}};
}

CoverageEntry entry_from(const nlohmann::json &j) {
  CoverageEntry e;
  e.id = j.at("id").get<std::uint64_t>();
  e.attribute = Attribute{j.at("table").get<std::string>(), j.at("column").get<std::string>()};
  const auto &x = j.at("extent");
  e.extent = Extent{QRect{x.at(0).get<int>(), x.at(1).get<int>(), x.at(2).get<int>(), x.at(3).get<int>()},
                    x.at(4).get<std::int64_t>(), x.at(5).get<std::int64_t>()};
  e.sres = j.at("sres").get<int>();
  e.tres = j.at("tres").get<std::int64_t>();
  e.param_signature = j.at("signature").get<std::string>();
  e.epoch = j.at("epoch").get<int>();
  e.created_at = j.at("created_at").get<std::int64_t>();
  e.runtime_s = j.at("runtime_s").get<double>();
  e.invocation = j.at("invocation").get<std::uint64_t>();
  return e;
}

}  // namespace

std::size_t GapSet::cell_count() const {
  std::size_t n = 0;
  for (const auto &g : gaps) {
    std::size_t ni = static_cast<std::size_t>((g.rect.i1 - g.rect.i0 + sres - 1) / sres);
    std::size_t nj = static_cast<std::size_t>((g.rect.j1 - g.rect.j0 + sres - 1) / sres);
    std::size_t nt = static_cast<std::size_t>((g.t1 - g.t0 + tres - 1) / tres);
    n += ni * nj * nt;
  }
  return n;
}

std::vector<std::string> ReuseReport::kinds() const {
  std::vector<std::string> k;
  if (spatial) k.push_back("spatial");
  if (temporal) k.push_back("temporal");
  if (resolution) k.push_back("resolution");
  return k;
}

bool satisfies(const CoverageEntry &e, int sres, std::int64_t tres) {
  return e.sres > 0 && e.tres > 0 && sres % e.sres == 0 && tres % e.tres == 0;
}

CoverageMap::CoverageMap(gridstore::Domain domain, bool strict_signature, std::optional<std::filesystem::path> file)
    : domain_(std::move(domain)), strict_(strict_signature), file_(std::move(file)) {
  if (file_) load();
}

std::int64_t CoverageMap::now() const {
  if (clock_) return clock_();
  return std::chrono::duration_cast<std::chrono::seconds>(std::chrono::system_clock::now().time_since_epoch())
      .count();
}

std::uint64_t CoverageMap::record(CoverageEntry entry) {
  if (entry.extent.empty() || entry.sres <= 0 || entry.tres <= 0) {
    throw Error("InvalidArgument", "coverage entry must have a non-empty extent and positive resolutions");
  }
  std::unique_lock lock(mu_);
  entry.id = next_id_++;
  if (entry.created_at == 0) entry.created_at = now();
  index_.insert(entry.id, index_box(entry.extent.rect));
  entries_.push_back(std::move(entry));
  if (file_) save();
  return entries_.back().id;
}

std::vector<const CoverageEntry *> CoverageMap::candidates(const GridRequest &req) const {
  std::vector<const CoverageEntry *> out;
  if (req.rects.empty()) return out;
  QRect box = req.rects[0];
  for (const auto &r : req.rects) {
    box.i0 = std::min(box.i0, r.i0);
    box.i1 = std::max(box.i1, r.i1);
    box.j0 = std::min(box.j0, r.j0);
    box.j1 = std::max(box.j1, r.j1);
  }
  box = gridstore::align_rect(box, req.sres, domain_.full_rect());
  auto ids = index_.query(index_box(box));
  for (auto id : ids) {
    // ids are assigned in insertion order and never reused
    auto it = std::lower_bound(entries_.begin(), entries_.end(), id,
                               [](const CoverageEntry &e, std::uint64_t v) { return e.id < v; });
    if (it == entries_.end() || it->id != id) continue;
    if (it->attribute != req.attribute) continue;
    if (strict_ && it->param_signature != req.param_signature) continue;
    out.push_back(&*it);
  }
  return out;
}

GapSet CoverageMap::find_gaps(const GridRequest &req) const {
  std::shared_lock lock(mu_);
  return find_gaps_kernel(domain_, req, candidates(req), true);
}

GapSet CoverageMap::find_gaps(const GridRequest &req, const std::vector<CoverageEntry> &pending) const {
  std::shared_lock lock(mu_);
  auto cands = candidates(req);
  for (const auto &e : pending) {
    if (e.attribute == req.attribute && (!strict_ || e.param_signature == req.param_signature)) cands.push_back(&e);
  }
  return find_gaps_kernel(domain_, req, cands, true);
}

GapSet CoverageMap::find_gaps_serial(const GridRequest &req) const {
  std::shared_lock lock(mu_);
  return find_gaps_kernel(domain_, req, candidates(req), false);
}

ReuseReport CoverageMap::classify_reuse(const GridRequest &req) const {
  std::shared_lock lock(mu_);
  ReuseReport rep;
  const QRect bounds = domain_.full_rect();
  const int s = req.sres;
  auto [t0, t1] = gridstore::align_span(req.t0, req.t1, req.tres, domain_.duration());
  std::vector<QRect> rects;
  for (const auto &r : req.rects) {
    QRect a = gridstore::align_rect(r, s, bounds);
    if (!a.empty()) rects.push_back(a);
  }
  rects = gridstore::union_rects(rects);
  auto cands = candidates(req);
  std::vector<const CoverageEntry *> usable;
  for (auto *e : cands) {
    if (satisfies(*e, s, req.tres)) usable.push_back(e);
  }
  std::sort(usable.begin(), usable.end(), better);
  std::set<std::uint64_t> invocations;
  for (std::int64_t ts = t0; ts < t1; ts += req.tres) {
    std::int64_t te = std::min(t1, ts + req.tres);
    for (const auto &r : rects) {
      for (int i = r.i0; i < r.i1; i += s) {
        for (int j = r.j0; j < r.j1; j += s) {
          QRect cell{i, std::min(i + s, domain_.lat_quanta()), j, std::min(j + s, domain_.lon_quanta())};
          ++rep.requested_cells;
          for (const CoverageEntry *e : usable) {
            if (e->extent.t0 > ts || e->extent.t1 < te || !e->extent.rect.contains(cell)) continue;
            ++rep.covered_cells;
            invocations.insert(e->invocation ? e->invocation : (std::uint64_t{1} << 63) | e->id);
            bool same_rect = std::find(rects.begin(), rects.end(), e->extent.rect) != rects.end();
            if (!same_rect) rep.spatial = true;
            if (e->extent.t0 != t0 || e->extent.t1 != t1) rep.temporal = true;
            if (e->sres < s || e->tres < req.tres) rep.resolution = true;
            break;
          }
        }
      }
    }
  }
  rep.covered_fraction = rep.requested_cells ? static_cast<double>(rep.covered_cells) / rep.requested_cells : 0.0;
  rep.avoided_invocations = invocations.size();
  return rep;
}

std::size_t CoverageMap::invalidate(const Attribute &attr, const QRect &rect) {
  std::unique_lock lock(mu_);
  std::size_t n = 0;
  for (auto it = entries_.begin(); it != entries_.end();) {
    if (it->attribute == attr && it->extent.rect.overlaps(rect)) {
      index_.remove(it->id, index_box(it->extent.rect));
      it = entries_.erase(it);
      ++n;
    } else {
      ++it;
    }
  }
  if (file_ && n) save();
  return n;
}

void CoverageMap::clear() {
  std::unique_lock lock(mu_);
  entries_.clear();
  index_.clear();
  if (file_) save();
}

std::vector<CoverageEntry> CoverageMap::entries() const {
  std::shared_lock lock(mu_);
  return entries_;
}

std::vector<CoverageEntry> CoverageMap::entries(const Attribute &attr) const {
  std::shared_lock lock(mu_);
  std::vector<CoverageEntry> out;
  for (const auto &e : entries_) {
    if (e.attribute == attr) out.push_back(e);
  }
  return out;
}

nlohmann::json CoverageMap::geojson(const std::optional<Attribute> &attr) const {
  std::shared_lock lock(mu_);
  const std::int64_t t = now();
  nlohmann::json features = nlohmann::json::array();
  for (const auto &e : entries_) {
    if (attr && e.attribute != *attr) continue;
    gridstore::BBox b = domain_.to_bbox(e.extent.rect);
    nlohmann::json ring = {{b.lon_min, b.lat_min}, {b.lon_max, b.lat_min}, {b.lon_max, b.lat_max},
                           {b.lon_min, b.lat_max}, {b.lon_min, b.lat_min}};
    features.push_back(
        {{"type", "Feature"},
         {"id", e.id},
         {"geometry", {{"type", "Polygon"}, {"coordinates", {ring}}}},
         {"properties",
          {{"attribute", e.attribute.str()},
           {"spatial_res", gridstore::quanta_degrees(e.sres)},
           {"temporal_res", gridstore::seconds_hours(e.tres)},
           {"epoch", e.epoch},
           {"age_s", t - e.created_at},
           {"runtime_s", e.runtime_s},
           {"params", e.param_signature},
           {"start", gridstore::format_timestamp(domain_.abs(e.extent.t0))},
           {"end", gridstore::format_timestamp(domain_.abs(e.extent.t1))}}}});
  }
  return {{"type", "FeatureCollection"}, {"features", std::move(features)}};
}

void CoverageMap::save() const {
  nlohmann::json doc;
  doc["format"] = kCoverageFormat;
  doc["next_id"] = next_id_;
  nlohmann::json list = nlohmann::json::array();
  for (const auto &e : entries_) list.push_back(entry_json(e));
  doc["entries"] = std::move(list);
  auto tmp = *file_;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    out << doc.dump(1) << "\n";
    if (!out) throw Error("IOError", "cannot write coverage file");
  }
  std::filesystem::rename(tmp, *file_);
}

void CoverageMap::load() {
  if (!std::filesystem::exists(*file_)) return;
  std::ifstream in(*file_);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const std::exception &e) {
    throw Error("CorruptStore", fmt::format("coverage file: {}", e.what()));
  }
  if (doc.value("format", "") != kCoverageFormat) throw Error("CorruptStore", "unknown coverage format");
  next_id_ = doc.value("next_id", std::uint64_t{1});
  for (const auto &j : doc["entries"]) {
    CoverageEntry e = entry_from(j);
    index_.insert(e.id, index_box(e.extent.rect));
    entries_.push_back(std::move(e));
  }
}

}  // namespace genie::coverage
