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

#include "genie/simkit/plume.h"

#include <algorithm>
#include <cmath>

#include "genie/error.h"

namespace genie::simkit {

using gridstore::Extent;
using gridstore::GridField;

namespace {

constexpr std::uint64_t kReleaseStream = ~0ULL;

struct Group {
  double x0, x1, y0, y1;
  double w0, w1;
  double mass;
};

struct Frame {
  double qx, qy;  // metres per quantum
  double width, height;
  int nlat, nlon;

  double x_of(const gridstore::Domain &d, double lon) const { return d.j_at(lon) * qx; }
  double y_of(const gridstore::Domain &d, double lat) const { return d.i_at(lat) * qy; }
};

}  // namespace

std::int64_t plume_spinup_start(const std::vector<Extent> &extents, std::int64_t tres, const PlumeConfig &config) {
  std::int64_t t0 = 0;
  bool any = false;
  for (const auto &e : extents) {
    if (e.empty()) continue;
    t0 = any ? std::min(t0, e.t0) : e.t0;
    any = true;
  }
  auto spin = static_cast<std::int64_t>(std::llround(config.spinup_h * 3600.0));
  return std::max<std::int64_t>(0, gridstore::floor_to(t0 - spin, tres));
}

PlumeOutput plume_simulate(const gridstore::Domain &domain, const gridstore::Attribute &attr,
                           const std::vector<Extent> &extents, int sres, std::int64_t tres, double particles_per_hour,
                           const PlumeSource &source, const WindField &wind, const PlumeConfig &config,
                           std::uint64_t seed, bool parallel) {
  if (sres <= 0 || tres <= 0) throw Error("InvalidArgument", "resolutions must be positive");
  if (!(particles_per_hour >= 0.0)) throw Error("InvalidArgument", "particle rate must be non-negative");
  PlumeOutput out;
  for (const auto &e : extents) {
    if (e.rect.i0 % sres || e.rect.j0 % sres || e.t0 % tres) {
      throw Error("InvalidArgument", "plume extents must be aligned to the output grid");
    }
    out.fields.push_back(GridField::make(attr, sres, tres, e));
  }
  if (out.fields.empty()) return out;

  const double lat_ref = 0.5 * (domain.bbox().lat_min + domain.bbox().lat_max);
  Frame fr;
  fr.qy = gridstore::kQuantumDeg * gridstore::kMetersPerDegree;
  fr.qx = fr.qy * std::cos(lat_ref * M_PI / 180.0);
  fr.nlat = domain.lat_quanta();
  fr.nlon = domain.lon_quanta();
  fr.width = fr.nlon * fr.qx;
  fr.height = fr.nlat * fr.qy;

  // output cell lookup on the domain-wide sres grid
  const int gci = (fr.nlat + sres - 1) / sres, gcj = (fr.nlon + sres - 1) / sres;
  std::vector<std::uint32_t> head(static_cast<std::size_t>(gci) * gcj + 1, 0);
  std::vector<std::pair<std::uint32_t, std::uint32_t>> slots;
  {
    std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> lists(static_cast<std::size_t>(gci) * gcj);
    for (std::size_t k = 0; k < out.fields.size(); ++k) {
      const auto &f = out.fields[k];
      for (int ci = 0; ci < f.ni(); ++ci) {
        for (int cj = 0; cj < f.nj(); ++cj) {
          std::size_t g = static_cast<std::size_t>(f.extent.rect.i0 / sres + ci) * gcj + f.extent.rect.j0 / sres + cj;
          lists[g].push_back({static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(ci * f.nj() + cj)});
        }
      }
    }
    for (std::size_t g = 0; g < lists.size(); ++g) {
      head[g + 1] = head[g] + static_cast<std::uint32_t>(lists[g].size());
      slots.insert(slots.end(), lists[g].begin(), lists[g].end());
    }
  }
  std::vector<std::vector<double>> prev(out.fields.size()), cur(out.fields.size()), volume(out.fields.size());
  for (std::size_t k = 0; k < out.fields.size(); ++k) {
    const auto &f = out.fields[k];
    prev[k].assign(static_cast<std::size_t>(f.ni()) * f.nj(), 0.0);
    cur[k] = prev[k];
    volume[k].resize(prev[k].size());
    for (int ci = 0; ci < f.ni(); ++ci) {
      for (int cj = 0; cj < f.nj(); ++cj) {
        auto c = f.cell_rect(ci, cj);
        volume[k][static_cast<std::size_t>(ci) * f.nj() + cj] =
            (c.i1 - c.i0) * fr.qy * (c.j1 - c.j0) * fr.qx * config.mixing_height_m;
      }
    }
  }

  const std::int64_t T0 = plume_spinup_start(extents, tres, config);
  std::int64_t T1 = 0;
  for (const auto &e : extents) T1 = std::max(T1, e.t1);
  out.start = T0;

  std::vector<Particle> particles;
  std::vector<Group> groups;
  std::vector<double> cum;
  std::vector<double> rows(static_cast<std::size_t>(fr.nlat));
  std::vector<char> active(out.fields.size());
  double released = 0.0, exited = 0.0;
  std::uint64_t next_id = 0, step = 0;

  for (std::int64_t ta = T0; ta < T1; ta += tres, ++step) {
    const std::int64_t tb = ta + tres;

    // releases
    groups.clear();
    cum.clear();
    double total = 0.0;
    if (const GridField *em = source.emissions) {
      for (int t = 0; t < em->nt(); ++t) {
        double w0 = static_cast<double>(std::max(ta, em->step_start(t)));
        double w1 = static_cast<double>(std::min(tb, em->step_end(t)));
        if (w1 <= w0) continue;
        for (int ci = 0; ci < em->ni(); ++ci) {
          for (int cj = 0; cj < em->nj(); ++cj) {
            double rate = em->at(t, ci, cj);
            if (!(rate > 0.0)) continue;
            auto c = em->cell_rect(ci, cj);
            double area_km2 = (c.i1 - c.i0) * fr.qy * (c.j1 - c.j0) * fr.qx / 1e6;
            double m = rate * area_km2 * (w1 - w0) * 1e6;  // g to µg
            groups.push_back({c.j0 * fr.qx, c.j1 * fr.qx, c.i0 * fr.qy, c.i1 * fr.qy, w0, w1, m});
            total += m;
            cum.push_back(total);
          }
        }
      }
    }
    if (total > 0.0) {
      auto n = static_cast<std::uint64_t>(std::llround(particles_per_hour * static_cast<double>(tres) / 3600.0));
      n = std::max<std::uint64_t>(n, 1);
      const double m = total / static_cast<double>(n);
      for (std::uint64_t p = 0; p < n; ++p) {
        Particle q;
        q.id = next_id++;
        double u = uniform01(seed, q.id, kReleaseStream, 0) * total;
        auto g = static_cast<std::size_t>(std::upper_bound(cum.begin(), cum.end(), u) - cum.begin());
        g = std::min(g, groups.size() - 1);
        const auto &gr = groups[g];
        q.x = gr.x0 + uniform01(seed, q.id, kReleaseStream, 1) * (gr.x1 - gr.x0);
        q.y = gr.y0 + uniform01(seed, q.id, kReleaseStream, 2) * (gr.y1 - gr.y0);
        q.t = config.release == Release::StepStart ? gr.w0
                                                   : gr.w0 + uniform01(seed, q.id, kReleaseStream, 3) * (gr.w1 - gr.w0);
        q.mass = m;
        particles.push_back(q);
      }
      released += total;
      out.released += n;
    }
    for (const auto &pr : source.points) {
      if (pr.t < ta || pr.t >= tb || pr.particles == 0) continue;
      const double m = pr.mass_ug / static_cast<double>(pr.particles);
      for (std::size_t p = 0; p < pr.particles; ++p) {
        Particle q;
        q.id = next_id++;
        q.x = fr.x_of(domain, pr.lon);
        q.y = fr.y_of(domain, pr.lat);
        q.t = static_cast<double>(pr.t);
        q.mass = m;
        particles.push_back(q);
      }
      released += pr.mass_ug;
      out.released += pr.particles;
    }

    // transport
    if (parallel) {
      advance_particles(particles, static_cast<double>(tb), wind, config.diffusivity, seed, step);
    } else {
      advance_particles_serial(particles, static_cast<double>(tb), wind, config.diffusivity, seed, step);
    }
    out.particle_steps += particles.size();
    auto gone = std::stable_partition(particles.begin(), particles.end(), [&](const Particle &p) {
      return p.x >= 0.0 && p.x < fr.width && p.y >= 0.0 && p.y < fr.height;
    });
    for (auto it = gone; it != particles.end(); ++it) exited += it->mass;
    particles.erase(gone, particles.end());

    // snapshot at tb
    bool any_active = false;
    for (std::size_t k = 0; k < out.fields.size(); ++k) {
      const auto &e = out.fields[k].extent;
      active[k] = e.t0 <= tb && tb <= e.t1;
      any_active = any_active || active[k];
    }
    std::fill(rows.begin(), rows.end(), 0.0);
    for (const auto &p : particles) {
      int qi = std::min(fr.nlat - 1, static_cast<int>(p.y / fr.qy));
      int qj = std::min(fr.nlon - 1, static_cast<int>(p.x / fr.qx));
      rows[static_cast<std::size_t>(qi)] += p.mass;
      if (!any_active) continue;
      std::size_t g = static_cast<std::size_t>(qi / sres) * gcj + qj / sres;
      for (auto s = head[g]; s < head[g + 1]; ++s) {
        if (active[slots[s].first]) cur[slots[s].first][slots[s].second] += p.mass;
      }
    }
    double in_cells = 0.0;
    for (double r : rows) in_cells += r;
    out.ledger.push_back({tb, released, in_cells, exited});

    for (std::size_t k = 0; k < out.fields.size(); ++k) {
      if (!active[k]) continue;
      auto &f = out.fields[k];
      if (tb > f.extent.t0) {
        int t = static_cast<int>((tb - tres - f.extent.t0) / tres);
        std::size_t base = static_cast<std::size_t>(t) * f.ni() * f.nj();
        for (std::size_t c = 0; c < cur[k].size(); ++c) {
          double m = config.sampling == Sampling::Trapezoid ? 0.5 * (prev[k][c] + cur[k][c]) : cur[k][c];
          f.values[base + c] = m / volume[k][c];
        }
      }
      std::swap(prev[k], cur[k]);
      std::fill(cur[k].begin(), cur[k].end(), 0.0);
    }
  }
  return out;
}

}  // namespace genie::simkit
