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

#ifndef CMOTION_ASSOCIATION_H_
#define CMOTION_ASSOCIATION_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "cmotion/feature_map.h"
#include "cmotion/grid.h"
#include "cmotion/patch_layout.h"

namespace cmotion {

struct QueryMatch {
  int query = -1;
  int patch = -1;
  int target = -1;  // argmax key cell, -1 when the key patch has no non-empty pillar
  double max_prob = 0.0;
  std::vector<double> probs;  // aligned with AssociationResult::patch_keys[patch]
};

struct AssociationResult {
  int rows = 0;
  int cols = 0;
  std::vector<std::vector<int>> patch_keys;  // non-empty key cells per patch, ascending
  std::vector<QueryMatch> matches;           // one per non-empty query, ascending cell
  std::size_t dot_products = 0;

  const QueryMatch* find(int query_cell) const;
};

// Softmax over inner products between each non-empty query pillar and the
// non-empty pillars of its key patch; argmax ties go to the lowest key cell.
AssociationResult associate(const FeatureMap& z_t, const FeatureMap& z_t1,
                            const std::vector<std::uint8_t>& query_mask,
                            const std::vector<std::uint8_t>& key_mask, const PatchLayout& layout);
AssociationResult associate(const FeatureMap& z_t, const FeatureMap& z_t1, const Pillarization& pill_t,
                            const Pillarization& pill_t1, const PatchLayout& layout);

struct FlowField {
  int rows = 0;
  int cols = 0;
  std::vector<Vec2> pillar;          // c(target) - c(source); zero where unmatched
  std::vector<std::uint8_t> matched;

  // Mean over matched pillars, zero when none matched.
  Vec2 mean_matched() const;
};

FlowField pillar_flow(const AssociationResult& assoc, const GridSpec& grid);

// Each point takes its pillar's (dx, dy, 0). Ground points (mask true) get
// zero; points outside the grid get the mean matched pillar flow. An empty
// ground_mask disables masking.
std::vector<Vec3> scatter_to_points(const FlowField& flow, const Pillarization& pill,
                                    const std::vector<bool>& ground_mask);

// Per matched source pillar, draws a reference point and picks the point of
// the matched target pillar closest to reference + pillar flow. Every point of
// the source pillar receives (chosen target point - reference point).
// Pillars without a usable match keep `fallback`.
std::vector<Vec3> chamfer_refine(const PointCloud& pc_t, const PointCloud& pc_t1,
                                 const AssociationResult& assoc, const FlowField& flow,
                                 const Pillarization& pill_t, const Pillarization& pill_t1,
                                 const std::vector<Vec3>& fallback, std::uint64_t seed);

// Text heat map of one query's probabilities over its key window:
//   PMAP1 <cols> <rows> <query_row> <query_col> <row_begin> <col_begin>
// followed by <rows> lines of <cols> probabilities. Empty keys print as 0.
// Returns false when the cell is not a matched query.
bool write_probability_map(std::ostream& out, const AssociationResult& assoc,
                           const PatchLayout& layout, int query_cell);
// Same window as a plain PGM (P2) image scaled to the row maximum.
bool write_probability_pgm(std::ostream& out, const AssociationResult& assoc,
                           const PatchLayout& layout, int query_cell);

}  // namespace cmotion

#endif  // CMOTION_ASSOCIATION_H_
