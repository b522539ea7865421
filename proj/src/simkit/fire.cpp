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

#include "genie/simkit/fire.h"

#include <algorithm>
#include <cmath>

#include "genie/error.h"

namespace genie::simkit {

using gridstore::GridField;
using gridstore::kMetersPerDegree;
using gridstore::kQuantumDeg;

namespace {

struct Front {
  double lat0, lon0, a, b, ux, uy, rate;
};

std::optional<Front> front(const Ignition &ig, std::int64_t t, const WindField &wind, const FireConfig &c) {
  double elapsed = static_cast<double>(t - ig.start);
  if (elapsed <= 0.0 || elapsed > ig.duration_h * 3600.0 || ig.intensity <= 0.0) return std::nullopt;
  double r = c.spread_kmh * ig.intensity * elapsed / 3600.0 * 1000.0;
  auto [u, v] = wind.at(t - 1);
  double speed = std::hypot(u, v);
  Front f{ig.lat, ig.lon, r, r, 1.0, 0.0, ig.intensity};
  if (speed >= 0.1) {
    f.a = c.elongation * r;
    f.ux = u / speed;
    f.uy = v / speed;
  }
  return f;
}

bool inside(const Front &f, double lat, double lon) {
  double dy = (lat - f.lat0) * kMetersPerDegree;
  double dx = (lon - f.lon0) * kMetersPerDegree * std::cos(0.5 * (lat + f.lat0) * M_PI / 180.0);
  double along = dx * f.ux + dy * f.uy;
  double cross = -dx * f.uy + dy * f.ux;
  double p = along / f.a, q = cross / f.b;
  return p * p + q * q <= 1.0;
}

}  // namespace

double diurnal_factor(const FireConfig &config, std::int64_t t) {
  double h = static_cast<double>(((t % 86400) + 86400) % 86400) / 3600.0;
  return 1.0 + config.diurnal_amplitude * std::cos(2.0 * M_PI * (h - config.peak_hour_utc) / 24.0);
}

bool fire_burning(const Ignition &ig, double lat, double lon, std::int64_t t, const WindField &wind,
                  const FireConfig &config) {
  auto f = front(ig, t, wind, config);
  return f && inside(*f, lat, lon);
}

std::vector<GridField> fire_simulate(const gridstore::Domain &domain, const gridstore::Attribute &attr,
                                     const std::vector<gridstore::Extent> &extents, int sres, std::int64_t tres,
                                     const std::vector<Ignition> &ignitions, const WindField &wind,
                                     const FireConfig &config, bool parallel) {
  if (sres <= 0 || tres <= 0) throw Error("InvalidArgument", "resolutions must be positive");
  std::vector<GridField> out;
  const std::int64_t nsub = std::max<std::int64_t>(1, tres / std::max<std::int64_t>(1, config.substep_s));
  for (const auto &e : extents) {
    GridField field = GridField::make(attr, sres, tres, e);
    const int ni = field.ni(), nj = field.nj(), nt = field.nt();
    const auto &r = e.rect;
    std::vector<double> counts(static_cast<std::size_t>(ni) * nj);
    for (int t = 0; t < nt; ++t) {
      std::fill(counts.begin(), counts.end(), 0.0);
      const std::int64_t s0 = field.step_start(t), s1 = field.step_end(t);
      const std::int64_t k_n = std::max<std::int64_t>(1, (s1 - s0) * nsub / tres);
      for (std::int64_t k = 1; k <= k_n; ++k) {
        const std::int64_t tau = s0 + (s1 - s0) * k / k_n;
        for (const auto &ig : ignitions) {
          auto f = front(ig, tau, wind, config);
          if (!f) continue;
          double reach = std::max(f->a, f->b);
          double dlat = reach / kMetersPerDegree + kQuantumDeg;
          double dlon = reach / (kMetersPerDegree * std::cos(std::min(89.0, std::fabs(f->lat0) + dlat) * M_PI / 180.0)) +
                        kQuantumDeg;
          int qi0 = std::max(r.i0, static_cast<int>(std::floor(domain.i_at(f->lat0 - dlat))));
          int qi1 = std::min(r.i1, static_cast<int>(std::ceil(domain.i_at(f->lat0 + dlat))));
          int qj0 = std::max(r.j0, static_cast<int>(std::floor(domain.j_at(f->lon0 - dlon))));
          int qj1 = std::min(r.j1, static_cast<int>(std::ceil(domain.j_at(f->lon0 + dlon))));
          if (qi0 >= qi1 || qj0 >= qj1) continue;
          const double w = f->rate * diurnal_factor(config, domain.abs(tau)) / static_cast<double>(k_n);
          const int ci0 = (qi0 - r.i0) / sres, ci1 = (qi1 - 1 - r.i0) / sres + 1;
#pragma omp parallel for schedule(dynamic) if (parallel)
          for (int ci = ci0; ci < ci1; ++ci) {
            int a0 = std::max(qi0, r.i0 + ci * sres), a1 = std::min(qi1, r.i0 + (ci + 1) * sres);
            for (int qi = a0; qi < a1; ++qi) {
              double lat = domain.lat_at(qi + 0.5);
              for (int qj = qj0; qj < qj1; ++qj) {
                if (inside(*f, lat, domain.lon_at(qj + 0.5))) {
                  counts[static_cast<std::size_t>(ci) * nj + (qj - r.j0) / sres] += w;
                }
              }
            }
          }
        }
      }
      for (int ci = 0; ci < ni; ++ci) {
        for (int cj = 0; cj < nj; ++cj) {
          auto cell = field.cell_rect(ci, cj);
          double sub = static_cast<double>(cell.area());
          field.at(t, ci, cj) = config.beta * counts[static_cast<std::size_t>(ci) * nj + cj] / sub;
        }
      }
    }
    out.push_back(std::move(field));
  }
  return out;
}

}  // namespace genie::simkit
