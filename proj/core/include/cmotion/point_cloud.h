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

#ifndef CMOTION_POINT_CLOUD_H_
#define CMOTION_POINT_CLOUD_H_

#include <cstddef>
#include <vector>

#include <Eigen/Core>

namespace cmotion {

using Vec3 = Eigen::Vector3d;
using Vec2 = Eigen::Vector2d;

// A timestamped set of 3D points in meters. `flow` is either empty or holds
// one ground-truth displacement per point (synthetic scenes only).
struct PointCloud {
  std::vector<Vec3> points;
  double timestamp = 0.0;
  std::vector<Vec3> flow;

  std::size_t size() const { return points.size(); }
  bool empty() const { return points.empty(); }
  bool has_flow() const { return !flow.empty(); }
};

// Throws std::invalid_argument if any coordinate is non-finite or the flow
// length disagrees with the point count.
void validate(const PointCloud& pc);

// Similarity transform restricted to planar rotation: p -> scale * Rz(yaw) * p + translation.
struct RigidTransform {
  double yaw = 0.0;
  Vec3 translation = Vec3::Zero();
  double scale = 1.0;

  static RigidTransform identity() { return {}; }
  static RigidTransform translate(double tx, double ty, double tz = 0.0) {
    return {0.0, Vec3(tx, ty, tz), 1.0};
  }

  Vec3 apply(const Vec3& p) const;
  Vec2 apply_xy(const Vec2& p) const;
  RigidTransform inverse() const;
  bool is_identity() const;
};

// a ∘ b, i.e. the transform applying b first and then a.
RigidTransform compose(const RigidTransform& a, const RigidTransform& b);

// Maps every point; flow vectors are left untouched and the timestamp is kept.
PointCloud apply_transform(const PointCloud& pc, const RigidTransform& transform);

// Per-point ground partition by height.
struct GroundSplit {
  PointCloud foreground;
  std::vector<bool> ground_mask;
  // Index into the input cloud for every foreground point.
  std::vector<int> foreground_index;
};

// Points with z <= z_threshold are ground.
GroundSplit remove_ground(const PointCloud& pc, double z_threshold);

}  // namespace cmotion

#endif  // CMOTION_POINT_CLOUD_H_
