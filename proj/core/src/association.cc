// Copyright 2026 The ContrastMotion Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cmotion/association.h"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <random>
#include <stdexcept>

namespace cmotion {

const QueryMatch* AssociationResult::find(int query_cell) const {
  auto it = std::lower_bound(matches.begin(), matches.end(), query_cell,
                             [](const QueryMatch& m, int c) { return m.query < c; });
  return it != matches.end() && it->query == query_cell ? &*it : nullptr;
}

AssociationResult associate(const FeatureMap& z_t, const FeatureMap& z_t1,
                            const std::vector<std::uint8_t>& query_mask,
                            const std::vector<std::uint8_t>& key_mask, const PatchLayout& layout) {
  require_same_shape(z_t, z_t1, "associate");
  if (layout.rows != z_t.rows || layout.cols != z_t.cols ||
      query_mask.size() != static_cast<std::size_t>(z_t.cells()) ||
      key_mask.size() != static_cast<std::size_t>(z_t.cells())) {
    throw std::invalid_argument("associate: layout or masks do not match feature maps");
  }
  const int d = z_t.channels;
  AssociationResult out;
  out.rows = z_t.rows;
  out.cols = z_t.cols;
  out.patch_keys.resize(layout.num_patches());
  for (int p = 0; p < layout.num_patches(); ++p) {
    for (int c : layout.key_cells(p)) {
      if (key_mask[c]) out.patch_keys[p].push_back(c);
    }
  }

  for (int cell = 0; cell < z_t.cells(); ++cell) {
    if (!query_mask[cell]) continue;
    QueryMatch m;
    m.query = cell;
    m.patch = layout.patch_of(cell);
    const std::vector<int>& keys = out.patch_keys[m.patch];
    if (!keys.empty()) {
      const double* zi = z_t.data.data() + static_cast<std::size_t>(cell) * d;
      m.probs.resize(keys.size());
      double mx = -std::numeric_limits<double>::infinity();
      std::size_t best = 0;
      for (std::size_t k = 0; k < keys.size(); ++k) {
        const double* zk = z_t1.data.data() + static_cast<std::size_t>(keys[k]) * d;
        double s = 0.0;
        for (int c = 0; c < d; ++c) s += zi[c] * zk[c];
        m.probs[k] = s;
        if (s > mx) {
          mx = s;
          best = k;
        }
      }
      out.dot_products += keys.size();
      double sum = 0.0;
      for (double& p : m.probs) {
        p = std::exp(p - mx);
        sum += p;
      }
      for (double& p : m.probs) p /= sum;
      m.target = keys[best];
      m.max_prob = m.probs[best];
    }
    out.matches.push_back(std::move(m));
  }
  return out;
}

AssociationResult associate(const FeatureMap& z_t, const FeatureMap& z_t1, const Pillarization& pill_t,
                            const Pillarization& pill_t1, const PatchLayout& layout) {
  return associate(z_t, z_t1, pill_t.mask(), pill_t1.mask(), layout);
}

Vec2 FlowField::mean_matched() const {
  Vec2 sum = Vec2::Zero();
  std::size_t n = 0;
  for (std::size_t k = 0; k < pillar.size(); ++k) {
    if (!matched[k]) continue;
    sum += pillar[k];
    ++n;
  }
  return n ? Vec2(sum / static_cast<double>(n)) : Vec2::Zero();
}

FlowField pillar_flow(const AssociationResult& assoc, const GridSpec& grid) {
  if (grid.rows() != assoc.rows || grid.cols() != assoc.cols) {
    throw std::invalid_argument("pillar_flow: grid does not match association");
  }
  FlowField f;
  f.rows = assoc.rows;
  f.cols = assoc.cols;
  f.pillar.assign(static_cast<std::size_t>(f.rows) * f.cols, Vec2::Zero());
  f.matched.assign(f.pillar.size(), 0);
  for (const QueryMatch& m : assoc.matches) {
    if (m.target < 0) continue;
    f.pillar[m.query] = grid.center(m.target) - grid.center(m.query);
    f.matched[m.query] = 1;
  }
  return f;
}

std::vector<Vec3> scatter_to_points(const FlowField& flow, const Pillarization& pill,
                                    const std::vector<bool>& ground_mask) {
  if (!ground_mask.empty() && ground_mask.size() != pill.num_points()) {
    throw std::invalid_argument("scatter_to_points: ground mask length mismatch");
  }
  const Vec2 mean = flow.mean_matched();
  std::vector<Vec3> out(pill.num_points(), Vec3::Zero());
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (!ground_mask.empty() && ground_mask[i]) continue;
    const int cell = pill.cell_of_point(static_cast<int>(i));
    const Vec2 f = cell < 0 ? mean : flow.pillar[cell];
    out[i] = Vec3(f.x(), f.y(), 0.0);
  }
  return out;
}

std::vector<Vec3> chamfer_refine(const PointCloud& pc_t, const PointCloud& pc_t1,
                                 const AssociationResult& assoc, const FlowField& flow,
                                 const Pillarization& pill_t, const Pillarization& pill_t1,
                                 const std::vector<Vec3>& fallback, std::uint64_t seed) {
  if (fallback.size() != pc_t.size()) {
    throw std::invalid_argument("chamfer_refine: fallback length mismatch");
  }
  std::vector<Vec3> out = fallback;
  std::mt19937_64 rng(seed);
  for (const QueryMatch& m : assoc.matches) {
    if (m.target < 0) continue;
    const auto src = pill_t.points_in(m.query);
    const auto dst = pill_t1.points_in(m.target);
    if (src.empty() || dst.empty()) continue;
    const int ref = src[std::uniform_int_distribution<std::size_t>(0, src.size() - 1)(rng)];
    const Vec2& f = flow.pillar[m.query];
    const Vec3 guess = pc_t.points[ref] + Vec3(f.x(), f.y(), 0.0);
    int best = dst[0];
    double best_d = (pc_t1.points[best] - guess).squaredNorm();
    for (std::size_t k = 1; k < dst.size(); ++k) {
      const double dd = (pc_t1.points[dst[k]] - guess).squaredNorm();
      if (dd < best_d) {
        best_d = dd;
        best = dst[k];
      }
    }
    const Vec3 refined = pc_t1.points[best] - pc_t.points[ref];
    for (int i : src) out[i] = refined;
  }
  return out;
}

namespace {

// Dense probabilities over the key window of `m`.
std::vector<double> window_probs(const AssociationResult& assoc, const PatchLayout& layout,
                                 const QueryMatch& m, CellWindow& w) {
  w = layout.keys[m.patch];
  const int wc = w.col_end - w.col_begin;
  std::vector<double> grid(static_cast<std::size_t>(w.size()), 0.0);
  const auto& keys = assoc.patch_keys[m.patch];
  for (std::size_t k = 0; k < keys.size(); ++k) {
    const int r = keys[k] / layout.cols - w.row_begin;
    const int c = keys[k] % layout.cols - w.col_begin;
    grid[static_cast<std::size_t>(r) * wc + c] = m.probs[k];
  }
  return grid;
}

}  // namespace

bool write_probability_map(std::ostream& out, const AssociationResult& assoc,
                           const PatchLayout& layout, int query_cell) {
  const QueryMatch* m = assoc.find(query_cell);
  if (!m || m->target < 0) return false;
  CellWindow w;
  const std::vector<double> grid = window_probs(assoc, layout, *m, w);
  const int wc = w.col_end - w.col_begin, wr = w.row_end - w.row_begin;
  out << "PMAP1 " << wc << ' ' << wr << ' ' << query_cell / layout.cols << ' '
      << query_cell % layout.cols << ' ' << w.row_begin << ' ' << w.col_begin << '\n';
  out << std::setprecision(17);
  for (int r = 0; r < wr; ++r) {
    for (int c = 0; c < wc; ++c) out << (c ? " " : "") << grid[static_cast<std::size_t>(r) * wc + c];
    out << '\n';
  }
  return static_cast<bool>(out);
}

bool write_probability_pgm(std::ostream& out, const AssociationResult& assoc,
                           const PatchLayout& layout, int query_cell) {
  const QueryMatch* m = assoc.find(query_cell);
  if (!m || m->target < 0) return false;
  CellWindow w;
  const std::vector<double> grid = window_probs(assoc, layout, *m, w);
  const int wc = w.col_end - w.col_begin, wr = w.row_end - w.row_begin;
  const double peak = std::max(m->max_prob, 1e-300);
  out << "P2\n" << wc << ' ' << wr << "\n255\n";
  for (int r = 0; r < wr; ++r) {
    for (int c = 0; c < wc; ++c) {
      out << (c ? " " : "")
          << static_cast<int>(std::lround(255.0 * grid[static_cast<std::size_t>(r) * wc + c] / peak));
    }
    out << '\n';
  }
  return static_cast<bool>(out);
}

}  // namespace cmotion
