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

#ifndef CMOTION_SYNTHETIC_SCENE_H_
#define CMOTION_SYNTHETIC_SCENE_H_

#include <cstdint>
#include <vector>

#include "cmotion/point_cloud.h"

namespace cmotion {

// A rigid box moving at constant planar velocity and yaw rate. Pose is given
// at t = 0 in the world frame; the box rests on the ground plane.
struct BoxSpec {
  Vec2 center = Vec2::Zero();
  double yaw = 0.0;
  Vec3 size = Vec3(4.0, 2.0, 1.5);  // length, width, height
  Vec2 velocity = Vec2::Zero();     // m/s
  double yaw_rate = 0.0;            // rad/s
};

struct SceneSpec {
  double ground_extent = 8.0;  // ground covers [-extent, extent]^2 in the world frame
  double ground_height = 0.0;
  double ground_density = 4.0;   // points per m^2
  double surface_density = 24.0;  // points per m^2 of box surface
  bool sample_box_top = true;
  std::vector<BoxSpec> boxes;
  Vec2 ego_velocity = Vec2::Zero();
  std::uint64_t seed = 0;

  void validate() const;
};

// Samples the scene as seen from the sensor at time t. The sensor sits at
// ego_velocity * t with world-aligned axes. Surface samples are fixed in each
// body frame, so the k-th point refers to the same physical surface point at
// every t. `flow` holds each point's world displacement over [t, t + dt]; ground
// points are static.
PointCloud synth_scene(const SceneSpec& spec, double t, double dt);

// Transform taking sensor coordinates at t + dt to sensor coordinates at t.
RigidTransform ego_transform(const SceneSpec& spec, double dt);

struct BoxPose {
  Vec2 center;
  double yaw;
};
BoxPose box_pose(const BoxSpec& box, double t);

// Random scene with `num_boxes` boxes placed inside [-half_extent, half_extent]^2.
// Speeds are drawn from [0, max_speed]; about one box in four is parked.
SceneSpec random_scene(int num_boxes, double half_extent, double max_speed,
                       std::uint64_t seed);

}  // namespace cmotion

#endif  // CMOTION_SYNTHETIC_SCENE_H_
