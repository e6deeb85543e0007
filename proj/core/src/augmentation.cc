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

#include "cmotion/augmentation.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

namespace cmotion {

namespace {

double uniform(std::mt19937_64& rng, double limit) {
  if (limit <= 0.0) return 0.0;
  return std::uniform_real_distribution<double>(-limit, limit)(rng);
}

// Keeps n - floor(ratio * n) indices in ascending order.
std::vector<int> surviving_indices(std::size_t n, double ratio, std::mt19937_64& rng) {
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  const auto drop = static_cast<std::size_t>(std::floor(ratio * static_cast<double>(n)));
  if (drop == 0) return idx;
  std::shuffle(idx.begin(), idx.end(), rng);
  idx.resize(n - drop);
  std::sort(idx.begin(), idx.end());
  return idx;
}

RigidTransform draw_transform(const AugmentationSpec& spec, std::mt19937_64& rng) {
  RigidTransform t;
  t.yaw = uniform(rng, spec.max_rotation);
  t.translation = Vec3(uniform(rng, spec.max_shift), uniform(rng, spec.max_shift), 0.0);
  if (spec.max_scale > 1.0) {
    t.scale = std::uniform_real_distribution<double>(1.0 / spec.max_scale, spec.max_scale)(rng);
  }
  return t;
}

}  // namespace

void AugmentationSpec::validate() const {
  if (!(max_shift >= 0.0) || !(max_rotation >= 0.0) || !(max_jitter >= 0.0) ||
      !(max_scale >= 0.0)) {
    throw std::invalid_argument("augmentation bounds must be non-negative");
  }
  if (!(removal_ratio >= 0.0 && removal_ratio < 1.0)) {
    throw std::invalid_argument("removal_ratio must lie in [0, 1)");
  }
}

RigidTransform sample_transform(const AugmentationSpec& spec, std::uint64_t seed) {
  spec.validate();
  std::mt19937_64 rng(seed);
  return draw_transform(spec, rng);
}

AugmentedPair generate_pair(const PointCloud& pc, const AugmentationSpec& spec,
                            std::uint64_t seed) {
  if (pc.empty()) throw std::invalid_argument("generate_pair: empty point cloud");
  spec.validate();
  std::mt19937_64 rng(seed);

  AugmentedPair out;
  out.transform = draw_transform(spec, rng);

  out.source_t = surviving_indices(pc.size(), spec.removal_ratio, rng);
  out.source_t1 = surviving_indices(pc.size(), spec.removal_ratio, rng);

  out.pc_t.timestamp = pc.timestamp;
  out.pc_t.points.reserve(out.source_t.size());
  out.pc_t.flow.reserve(out.source_t.size());
  for (int i : out.source_t) {
    const Vec3& p = pc.points[i];
    out.pc_t.points.push_back(p);
    out.pc_t.flow.push_back(out.transform.apply(p) - p);
  }

  out.pc_t1.timestamp = pc.timestamp;
  out.pc_t1.points.reserve(out.source_t1.size());
  for (int i : out.source_t1) {
    Vec3 q = out.transform.apply(pc.points[i]);
    q.x() += uniform(rng, spec.max_jitter);
    q.y() += uniform(rng, spec.max_jitter);
    q.z() += uniform(rng, spec.max_jitter);
    out.pc_t1.points.push_back(q);
  }
  return out;
}

}  // namespace cmotion
