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

#include "cmotion/labels.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cmotion {

CorrespondenceLabels correspondence_labels(const GridSpec& grid, const Pillarization& pill_t,
                                           const Pillarization& pill_t1,
                                           const RigidTransform& transform, double epsilon,
                                           const LabelWeights& weights) {
  if (pill_t.cells() != grid.cells() || pill_t1.cells() != grid.cells()) {
    throw std::invalid_argument("pillarizations do not match the grid");
  }
  const int rows = grid.rows(), cols = grid.cols();
  const int reach_r = static_cast<int>(std::ceil(epsilon / grid.dy));
  const int reach_c = static_cast<int>(std::ceil(epsilon / grid.dx));
  const double eps2 = epsilon * epsilon;

  CorrespondenceLabels labels;
  for (int cell = 0; cell < pill_t.cells(); ++cell) {
    if (!pill_t.non_empty(cell)) continue;
    const Vec2 mapped = transform.apply_xy(pill_t.centers()[cell]);
    const auto target = grid.cell_of(mapped.x(), mapped.y());
    if (!target) {
      labels.unlabeled.push_back({cell, UnlabeledReason::kOffGrid});
      continue;
    }
    QueryLabel q;
    q.source = cell;
    q.hard = pill_t1.non_empty(*target) ? *target : -1;
    const int tr = *target / cols, tc = *target % cols;
    const Vec2 anchor = grid.center(tr, tc);
    for (int r = std::max(0, tr - reach_r); r <= std::min(rows - 1, tr + reach_r); ++r) {
      for (int c = std::max(0, tc - reach_c); c <= std::min(cols - 1, tc + reach_c); ++c) {
        const int j = r * cols + c;
        if (!pill_t1.non_empty(j)) continue;
        if ((grid.center(r, c) - anchor).squaredNorm() >= eps2) continue;
        q.positives.push_back({j, j == *target ? weights.self : weights.neighbor});
      }
    }
    if (q.positives.empty()) {
      labels.unlabeled.push_back({cell, UnlabeledReason::kEmptyNeighborhood});
      continue;
    }
    labels.queries.push_back(std::move(q));
  }
  return labels;
}

}  // namespace cmotion
