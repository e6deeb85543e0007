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

#include "cmotion/point_cloud.h"

#include <cmath>
#include <stdexcept>

namespace cmotion {

void validate(const PointCloud& pc) {
  for (const Vec3& p : pc.points) {
    if (!p.allFinite()) throw std::invalid_argument("point cloud has non-finite coordinate");
  }
  if (pc.has_flow() && pc.flow.size() != pc.points.size()) {
    throw std::invalid_argument("flow length does not match point count");
  }
}

Vec3 RigidTransform::apply(const Vec3& p) const {
  const double c = std::cos(yaw);
  const double s = std::sin(yaw);
  return Vec3(scale * (c * p.x() - s * p.y()) + translation.x(),
              scale * (s * p.x() + c * p.y()) + translation.y(),
              scale * p.z() + translation.z());
}

Vec2 RigidTransform::apply_xy(const Vec2& p) const {
  const double c = std::cos(yaw);
  const double s = std::sin(yaw);
  return Vec2(scale * (c * p.x() - s * p.y()) + translation.x(),
              scale * (s * p.x() + c * p.y()) + translation.y());
}

RigidTransform RigidTransform::inverse() const {
  // p = R^T (q - t) / s
  const double c = std::cos(yaw);
  const double s = std::sin(yaw);
  const Vec3& t = translation;
  Vec3 inv_t(-(c * t.x() + s * t.y()) / scale, -(-s * t.x() + c * t.y()) / scale,
             -t.z() / scale);
  return {-yaw, inv_t, 1.0 / scale};
}

bool RigidTransform::is_identity() const {
  return yaw == 0.0 && scale == 1.0 && translation.isZero(0.0);
}

RigidTransform compose(const RigidTransform& a, const RigidTransform& b) {
  RigidTransform out;
  out.yaw = a.yaw + b.yaw;
  out.scale = a.scale * b.scale;
  out.translation = a.apply(b.translation);
  return out;
}

PointCloud apply_transform(const PointCloud& pc, const RigidTransform& transform) {
  if (transform.is_identity()) return pc;
  PointCloud out;
  out.timestamp = pc.timestamp;
  out.flow = pc.flow;
  out.points.reserve(pc.size());
  for (const Vec3& p : pc.points) out.points.push_back(transform.apply(p));
  return out;
}

GroundSplit remove_ground(const PointCloud& pc, double z_threshold) {
  GroundSplit split;
  split.foreground.timestamp = pc.timestamp;
  split.ground_mask.resize(pc.size());
  for (std::size_t i = 0; i < pc.size(); ++i) {
    const bool ground = pc.points[i].z() <= z_threshold;
    split.ground_mask[i] = ground;
    if (ground) continue;
    split.foreground.points.push_back(pc.points[i]);
    if (pc.has_flow()) split.foreground.flow.push_back(pc.flow[i]);
    split.foreground_index.push_back(static_cast<int>(i));
  }
  return split;
}

}  // namespace cmotion
