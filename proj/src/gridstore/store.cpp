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

#include "genie/gridstore/store.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <mutex>
#include <numeric>
#include <set>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "genie/error.h"
#include "genie/gridstore/field_io.h"

namespace genie::gridstore {

namespace {

constexpr const char *kManifestFormat = "genie-store/1";

bool extent_overlaps(const Extent &a, const Extent &b) {
  return a.rect.overlaps(b.rect) && a.t0 < b.t1 && b.t0 < a.t1;
}

bool extent_contains(const Extent &a, const Extent &b) {
  return a.rect.contains(b.rect) && a.t0 <= b.t0 && b.t1 <= a.t1;
}

Extent extent_intersect(const Extent &a, const Extent &b) {
  return Extent{a.rect.intersect(b.rect), std::max(a.t0, b.t0), std::min(a.t1, b.t1)};
}

nlohmann::json extent_json(const Extent &e) {
  return {e.rect.i0, e.rect.i1, e.rect.j0, e.rect.j1, e.t0, e.t1};
}

Extent extent_from(const nlohmann::json &j) {
  return Extent{QRect{j.at(0).get<int>(), j.at(1).get<int>(), j.at(2).get<int>(), j.at(3).get<int>()},
                j.at(4).get<std::int64_t>(), j.at(5).get<std::int64_t>()};
}

// Index range [lo, hi) of cells of size `res` starting at `origin` whose
// footprint lies inside [a, b).
std::pair<int, int> cells_inside(std::int64_t origin, std::int64_t res, std::int64_t a, std::int64_t b, int n,
                                 std::int64_t clip_end) {
  std::int64_t lo = (std::max(a, origin) - origin + res - 1) / res;
  std::int64_t hi = 0;
  if (b >= clip_end) {
    hi = n;
  } else {
    hi = (b - origin) / res;
  }
  lo = std::clamp<std::int64_t>(lo, 0, n);
  hi = std::clamp<std::int64_t>(hi, 0, n);
  return {static_cast<int>(lo), static_cast<int>(std::max(lo, hi))};
}

}  // namespace

Store::Store(Domain domain, std::optional<std::filesystem::path> dir) : domain_(std::move(domain)), dir_(std::move(dir)) {
  if (dir_) {
    std::filesystem::create_directories(*dir_ / "fields");
    load();
  }
}

bool Store::outranks(const FieldInfo &a, const FieldInfo &b) {
  if (a.sres != b.sres) return a.sres < b.sres;
  if (a.tres != b.tres) return a.tres < b.tres;
  return a.seq > b.seq;
}

StoredTable &Store::create_table(const std::string &name, std::vector<ColumnSchema> columns) {
  std::unique_lock lock(mu_);
  auto [it, inserted] = tables_.try_emplace(name, name, std::move(columns));
  if (!inserted) throw Error("DuplicateTable", fmt::format("table {} already exists", name));
  return it->second;
}

StoredTable *Store::table(const std::string &name) {
  std::shared_lock lock(mu_);
  auto it = tables_.find(name);
  return it == tables_.end() ? nullptr : &it->second;
}

const StoredTable *Store::table(const std::string &name) const {
  std::shared_lock lock(mu_);
  auto it = tables_.find(name);
  return it == tables_.end() ? nullptr : &it->second;
}

std::vector<std::string> Store::table_names() const {
  std::shared_lock lock(mu_);
  std::vector<std::string> out;
  for (const auto &[n, t] : tables_) out.push_back(n);
  return out;
}

MergeReport Store::materialize(GridField field) {
  const Extent &fe = field.extent;
  if (!domain_.full_rect().contains(fe.rect) || fe.t0 < 0 || fe.t1 > domain_.duration()) {
    throw Error("DomainExceeded", fmt::format("field for {} leaves the registered domain", field.attribute.str()));
  }
  validate(field, domain_);

  std::unique_lock lock(mu_);
  auto &layers = fields_[field.attribute];
  MergeReport report;
  FieldInfo info;
  info.id = next_id_++;
  info.seq = next_seq_++;
  info.attribute = field.attribute;
  info.sres = field.sres;
  info.tres = field.tres;
  info.extent = fe;
  info.param_signature = field.param_signature;
  report.field_id = info.id;

  // Owner of each incoming cell centre before this call: paint overlapping
  // layers from lowest to highest priority.
  const int nt = field.nt(), ni = field.ni(), nj = field.nj();
  std::vector<int> owner(field.cell_count(), -1);
  for (int k = static_cast<int>(layers.size()) - 1; k >= 0; --k) {
    const Extent &le = layers[k].info.extent;
    if (!extent_overlaps(le, fe)) continue;
    Extent both = extent_intersect(le, fe);
    (outranks(layers[k].info, info) ? report.retained : report.replaced).push_back(both);
    for (int t = 0; t < nt; ++t) {
      std::int64_t c2 = field.step_start(t) + field.step_end(t);
      if (c2 < 2 * le.t0 || c2 >= 2 * le.t1) continue;
      for (int i = 0; i < ni; ++i) {
        for (int j = 0; j < nj; ++j) {
          QRect r = field.cell_rect(i, j);
          int ci = r.i0 + r.i1, cj = r.j0 + r.j1;
          if (ci >= 2 * le.rect.i0 && ci < 2 * le.rect.i1 && cj >= 2 * le.rect.j0 && cj < 2 * le.rect.j1) {
            owner[field.index(t, i, j)] = k;
          }
        }
      }
    }
  }
  for (int o : owner) {
    if (o < 0) ++report.new_cells;
    else if (outranks(layers[o].info, info)) ++report.retained_cells;
    else ++report.replaced_cells;
  }

  // Drop layers the new field hides completely and can stand in for.
  for (auto it = layers.begin(); it != layers.end();) {
    const FieldInfo &li = it->info;
    if (extent_contains(fe, li.extent) && li.sres % info.sres == 0 && li.tres % info.tres == 0) {
      report.dropped.push_back(li.id);
      if (dir_) std::filesystem::remove(*dir_ / "fields" / fmt::format("{}.gnfd", li.id));
      it = layers.erase(it);
    } else {
      ++it;
    }
  }

  report.bytes = encoded_size(field);
  bytes_ += report.bytes;
  if (dir_) save_field(*dir_ / "fields" / fmt::format("{}.gnfd", info.id), field, domain_);
  Entry entry{info, std::make_shared<const GridField>(std::move(field))};
  auto pos = std::find_if(layers.begin(), layers.end(), [&](const Entry &e) { return outranks(info, e.info); });
  layers.insert(pos, std::move(entry));
  if (dir_) write_manifest();
  return report;
}

std::optional<std::pair<int, std::int64_t>> Store::grid_unlocked(const Attribute &attr, const Extent &extent,
                                                                 const FieldFilter &accept) const {
  auto it = fields_.find(attr);
  if (it == fields_.end()) return std::nullopt;
  int g = 0;
  std::int64_t gt = 0;
  for (const auto &e : it->second) {
    if (!extent_overlaps(e.info.extent, extent) || (accept && !accept(e.info))) continue;
    g = std::gcd(g, e.info.sres);
    gt = std::gcd(gt, e.info.tres);
  }
  if (g == 0) return std::nullopt;
  return std::make_pair(g, gt);
}

std::optional<std::pair<int, std::int64_t>> Store::common_grid(const Attribute &attr, const Extent &extent,
                                                               const FieldFilter &accept) const {
  std::shared_lock lock(mu_);
  return grid_unlocked(attr, extent, accept);
}

Painted Store::paint_unlocked(const Attribute &attr, const Extent &extent, int sres, std::int64_t tres,
                              const FieldFilter &accept) const {
  QRect rect = align_rect(extent.rect, sres, domain_.full_rect());
  auto [t0, t1] = align_span(extent.t0, extent.t1, tres, domain_.duration());
  Painted out;
  out.field = GridField::make(attr, sres, tres, Extent{rect, t0, t1});
  GridField &g = out.field;
  std::fill(g.values.begin(), g.values.end(), std::numeric_limits<double>::quiet_NaN());
  out.owner.assign(g.cell_count(), 0);
  if (g.extent.empty()) return out;
  auto it = fields_.find(attr);
  if (it == fields_.end()) return out;
  const auto &layers = it->second;
  std::set<std::string> signatures;
  const int ni = g.ni(), nj = g.nj(), nt = g.nt();
  for (auto k = layers.rbegin(); k != layers.rend(); ++k) {
    const FieldInfo &fi = k->info;
    if (!extent_overlaps(fi.extent, g.extent) || (accept && !accept(fi))) continue;
    if (fi.sres % sres != 0 || fi.tres % tres != 0) {
      throw Error("InvalidArgument", "paint grid does not nest in a contributing field");
    }
    const GridField &f = *k->data;
    auto [ta, tb] = cells_inside(g.extent.t0, tres, fi.extent.t0, fi.extent.t1, nt, domain_.duration());
    auto [ia, ib] = cells_inside(g.extent.rect.i0, sres, fi.extent.rect.i0, fi.extent.rect.i1, ni,
                                 domain_.lat_quanta());
    auto [ja, jb] = cells_inside(g.extent.rect.j0, sres, fi.extent.rect.j0, fi.extent.rect.j1, nj,
                                 domain_.lon_quanta());
    if (ta >= tb || ia >= ib || ja >= jb) continue;
    signatures.insert(fi.param_signature);
    for (int t = ta; t < tb; ++t) {
      int ft = static_cast<int>((g.step_start(t) - f.extent.t0) / f.tres);
      for (int i = ia; i < ib; ++i) {
        int fi_ = (g.extent.rect.i0 + i * sres - f.extent.rect.i0) / f.sres;
        for (int j = ja; j < jb; ++j) {
          int fj = (g.extent.rect.j0 + j * sres - f.extent.rect.j0) / f.sres;
          std::size_t idx = g.index(t, i, j);
          g.values[idx] = f.at(ft, fi_, fj);
          out.owner[idx] = fi.id;
        }
      }
    }
  }
  std::string sig;
  for (const auto &s : signatures) sig += (sig.empty() ? "" : "|") + s;
  g.param_signature = sig;
  return out;
}

Painted Store::paint(const Attribute &attr, const Extent &extent, int sres, std::int64_t tres,
                     const FieldFilter &accept) const {
  std::shared_lock lock(mu_);
  return paint_unlocked(attr, extent, sres, tres, accept);
}

GridField Store::read(const Attribute &attr, const QRect &rect, std::int64_t t0, std::int64_t t1, int sres,
                      std::int64_t tres) const {
  std::shared_lock lock(mu_);
  Extent want{align_rect(rect, sres, domain_.full_rect()), 0, 0};
  std::tie(want.t0, want.t1) = align_span(t0, t1, tres, domain_.duration());
  auto eligible = [&](const FieldInfo &f) { return sres % f.sres == 0 && tres % f.tres == 0; };
  auto grid = grid_unlocked(attr, want, eligible);
  if (!grid || want.empty()) {
    throw Error("CoverageMiss", fmt::format("no data for {} in the requested region", attr.str()));
  }
  Painted p = paint_unlocked(attr, want, grid->first, grid->second, eligible);
  for (double v : p.field.values) {
    if (std::isnan(v)) throw Error("CoverageMiss", fmt::format("{} is not fully covered", attr.str()));
  }
  GridField out = aggregate(p.field, sres, tres);
  out.value_kind = ValueKind::Intensive;
  auto it = fields_.find(attr);
  if (it != fields_.end() && !it->second.empty()) out.value_kind = it->second.front().data->value_kind;
  return out;
}

std::optional<double> Store::value_at(const Attribute &attr, int i, int j, std::int64_t t) const {
  std::shared_lock lock(mu_);
  auto it = fields_.find(attr);
  if (it == fields_.end()) return std::nullopt;
  for (const auto &e : it->second) {
    const Extent &x = e.info.extent;
    if (i < x.rect.i0 || i >= x.rect.i1 || j < x.rect.j0 || j >= x.rect.j1 || t < x.t0 || t >= x.t1) continue;
    const GridField &f = *e.data;
    return f.at(static_cast<int>((t - x.t0) / f.tres), (i - x.rect.i0) / f.sres, (j - x.rect.j0) / f.sres);
  }
  return std::nullopt;
}

std::vector<FieldInfo> Store::fields(const Attribute &attr) const {
  std::shared_lock lock(mu_);
  std::vector<FieldInfo> out;
  auto it = fields_.find(attr);
  if (it != fields_.end()) {
    for (const auto &e : it->second) out.push_back(e.info);
  }
  return out;
}

std::vector<FieldInfo> Store::all_fields() const {
  std::shared_lock lock(mu_);
  std::vector<FieldInfo> out;
  for (const auto &[a, layers] : fields_) {
    for (const auto &e : layers) out.push_back(e.info);
  }
  return out;
}

std::optional<GridField> Store::field(std::uint64_t id) const {
  std::shared_lock lock(mu_);
  for (const auto &[a, layers] : fields_) {
    for (const auto &e : layers) {
      if (e.info.id == id) return *e.data;
    }
  }
  return std::nullopt;
}

void Store::clear_fields() {
  std::unique_lock lock(mu_);
  if (dir_) {
    for (const auto &[a, layers] : fields_) {
      for (const auto &e : layers) std::filesystem::remove(*dir_ / "fields" / fmt::format("{}.gnfd", e.info.id));
    }
  }
  fields_.clear();
  if (dir_) write_manifest();
}

void Store::drop_attribute(const Attribute &attr) {
  std::unique_lock lock(mu_);
  auto it = fields_.find(attr);
  if (it == fields_.end()) return;
  if (dir_) {
    for (const auto &e : it->second) std::filesystem::remove(*dir_ / "fields" / fmt::format("{}.gnfd", e.info.id));
  }
  fields_.erase(it);
  if (dir_) write_manifest();
}

std::size_t Store::bytes_materialized() const {
  std::shared_lock lock(mu_);
  return bytes_;
}

void Store::write_manifest() const {
  nlohmann::json m;
  m["format"] = kManifestFormat;
  m["next_id"] = next_id_;
  m["next_seq"] = next_seq_;
  m["bytes"] = bytes_;
  nlohmann::json list = nlohmann::json::array();
  for (const auto &[a, layers] : fields_) {
    for (const auto &e : layers) {
      list.push_back({{"id", e.info.id},
                      {"seq", e.info.seq},
                      {"table", a.table},
                      {"column", a.column},
                      {"sres", e.info.sres},
                      {"tres", e.info.tres},
                      {"extent", extent_json(e.info.extent)},
                      {"signature", e.info.param_signature},
                      {"file", fmt::format("fields/{}.gnfd", e.info.id)}});
    }
  }
  m["fields"] = std::move(list);
  auto path = *dir_ / "manifest.json";
  auto tmp = *dir_ / "manifest.json.tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    out << m.dump(2) << "\n";
    if (!out) throw Error("IOError", "cannot write store manifest");
  }
  std::filesystem::rename(tmp, path);
}

void Store::load() {
  auto path = *dir_ / "manifest.json";
  if (!std::filesystem::exists(path)) return;
  std::ifstream in(path);
  nlohmann::json m;
  try {
    m = nlohmann::json::parse(in);
  } catch (const std::exception &e) {
    throw Error("CorruptStore", fmt::format("manifest: {}", e.what()));
  }
  if (m.value("format", "") != kManifestFormat) throw Error("CorruptStore", "unknown manifest format");
  next_id_ = m.value("next_id", std::uint64_t{1});
  next_seq_ = m.value("next_seq", std::uint64_t{1});
  bytes_ = m.value("bytes", std::size_t{0});
  for (const auto &f : m["fields"]) {
    FieldInfo info;
    info.id = f.at("id").get<std::uint64_t>();
    info.seq = f.at("seq").get<std::uint64_t>();
    info.attribute = Attribute{f.at("table").get<std::string>(), f.at("column").get<std::string>()};
    info.sres = f.at("sres").get<int>();
    info.tres = f.at("tres").get<std::int64_t>();
    info.extent = extent_from(f.at("extent"));
    info.param_signature = f.at("signature").get<std::string>();
    auto data = std::make_shared<const GridField>(load_field(*dir_ / f.at("file").get<std::string>()));
    auto &layers = fields_[info.attribute];
    auto pos = std::find_if(layers.begin(), layers.end(), [&](const Entry &e) { return outranks(info, e.info); });
    layers.insert(pos, Entry{info, std::move(data)});
  }
  // Files written after the last manifest link are orphans.
  std::set<std::string> live;
  for (const auto &[a, layers] : fields_) {
    for (const auto &e : layers) live.insert(fmt::format("{}.gnfd", e.info.id));
  }
  for (const auto &entry : std::filesystem::directory_iterator(*dir_ / "fields")) {
    if (!live.count(entry.path().filename().string())) std::filesystem::remove(entry.path());
  }
}

}  // namespace genie::gridstore
