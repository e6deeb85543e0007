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

#ifndef CMOTION_AUGMENTATION_H_
#define CMOTION_AUGMENTATION_H_

#include <cstdint>
#include <vector>

#include "cmotion/point_cloud.h"

namespace cmotion {

// Upper limits for the random transform used to synthesize a training pair.
// Rotation is about the vertical axis; scale is drawn from [1/max_scale, max_scale]
// (no scaling when max_scale <= 1).
struct AugmentationSpec {
  double max_shift = 3.0;
  double max_rotation = 0.17;
  double max_scale = 1.05;
  double max_jitter = 0.1;
  double removal_ratio = 0.1;

  void validate() const;
};

struct AugmentedPair {
  PointCloud pc_t;
  PointCloud pc_t1;
  RigidTransform transform;  // maps frame t onto frame t+1, jitter excluded
  // For each output point, the index of the input point it was derived from.
  std::vector<int> source_t;
  std::vector<int> source_t1;
};

// Builds (pc_t, pc_t1) from a single cloud: pc_t1 = jitter(T(pc)); each side then
// independently drops floor(removal_ratio * n) points. pc_t carries the un-jittered
// displacement T(p) - p as its flow. Deterministic in `seed`.
AugmentedPair generate_pair(const PointCloud& pc, const AugmentationSpec& spec,
                            std::uint64_t seed);

RigidTransform sample_transform(const AugmentationSpec& spec, std::uint64_t seed);

}  // namespace cmotion

#endif  // CMOTION_AUGMENTATION_H_
