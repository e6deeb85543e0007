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

#ifndef CMOTION_LABELS_H_
#define CMOTION_LABELS_H_

#include <vector>

#include "cmotion/grid.h"

namespace cmotion {

struct PositiveKey {
  int cell;
  double weight;
};

struct QueryLabel {
  int source = -1;
  int hard = -1;  // pillar containing T(c(source)); -1 when that pillar is empty
  std::vector<PositiveKey> positives;  // ascending cell order
};

enum class UnlabeledReason { kOffGrid, kEmptyNeighborhood };

struct UnlabeledQuery {
  int source;
  UnlabeledReason reason;
};

struct LabelWeights {
  double self = 0.6;
  double neighbor = 0.1;
};

struct CorrespondenceLabels {
  std::vector<QueryLabel> queries;
  std::vector<UnlabeledQuery> unlabeled;
};

// Default positive radius: 1.1 pillar sides.
inline double default_epsilon(const GridSpec& grid) { return 1.1 * grid.dx; }

// For every non-empty source pillar i, maps c(i) through `transform` (z ignored)
// to its target pillar i' and collects the non-empty target pillars whose
// centers lie strictly within `epsilon` of c(i').
CorrespondenceLabels correspondence_labels(const GridSpec& grid, const Pillarization& pill_t,
                                           const Pillarization& pill_t1,
                                           const RigidTransform& transform, double epsilon,
                                           const LabelWeights& weights = {});

}  // namespace cmotion

#endif  // CMOTION_LABELS_H_
