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

#include "cmotion/synthetic_scene.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "cmotion/random.h"

namespace cmotion {

namespace {

Vec2 rotate(double yaw, const Vec2& p) {
  const double c = std::cos(yaw);
  const double s = std::sin(yaw);
  return Vec2(c * p.x() - s * p.y(), s * p.x() + c * p.y());
}

int sample_count(double density, double area) {
  return std::max(1, static_cast<int>(std::lround(density * area)));
}

// Surface points in the box body frame: x along length, z up from the ground.
std::vector<Vec3> box_surface(const BoxSpec& box, double density, bool top,
                              std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const double l = box.size.x(), w = box.size.y(), h = box.size.z();
  auto u = [&rng](double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
  };
  std::vector<Vec3> pts;
  for (double sign : {1.0, -1.0}) {
    const int n = sample_count(density, w * h);
    for (int i = 0; i < n; ++i) pts.emplace_back(sign * l / 2, u(-w / 2, w / 2), u(0, h));
  }
  for (double sign : {1.0, -1.0}) {
    const int n = sample_count(density, l * h);
    for (int i = 0; i < n; ++i) pts.emplace_back(u(-l / 2, l / 2), sign * w / 2, u(0, h));
  }
  if (top) {
    const int n = sample_count(density, l * w);
    for (int i = 0; i < n; ++i) pts.emplace_back(u(-l / 2, l / 2), u(-w / 2, w / 2), h);
  }
  return pts;
}

Vec3 to_world(const BoxPose& pose, const Vec3& local, double ground_height) {
  const Vec2 xy = rotate(pose.yaw, local.head<2>()) + pose.center;
  return Vec3(xy.x(), xy.y(), ground_height + local.z());
}

}  // namespace

void SceneSpec::validate() const {
  if (!(ground_density >= 0.0) || !(surface_density > 0.0)) {
    throw std::invalid_argument("scene densities must be positive");
  }
  if (!(ground_extent >= 0.0)) throw std::invalid_argument("ground extent must be >= 0");
  if (!ego_velocity.allFinite()) throw std::invalid_argument("ego velocity must be finite");
  for (const BoxSpec& b : boxes) {
    if (!(b.size.x() > 0.0 && b.size.y() > 0.0 && b.size.z() > 0.0)) {
      throw std::invalid_argument("box has zero size");
    }
    if (!b.velocity.allFinite() || !std::isfinite(b.yaw_rate) || !b.center.allFinite()) {
      throw std::invalid_argument("box pose and velocity must be finite");
    }
  }
}

BoxPose box_pose(const BoxSpec& box, double t) {
  return {box.center + box.velocity * t, box.yaw + box.yaw_rate * t};
}

RigidTransform ego_transform(const SceneSpec& spec, double dt) {
  const Vec2 d = spec.ego_velocity * dt;
  return RigidTransform::translate(d.x(), d.y());
}

PointCloud synth_scene(const SceneSpec& spec, double t, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("synth_scene: dt must be positive");
  spec.validate();

  PointCloud pc;
  pc.timestamp = t;
  const Vec2 ego = spec.ego_velocity * t;
  auto push = [&](const Vec3& world_now, const Vec3& world_next) {
    pc.points.emplace_back(world_now.x() - ego.x(), world_now.y() - ego.y(), world_now.z());
    pc.flow.push_back(world_next - world_now);
  };

  {
    std::mt19937_64 rng(mix_seed(spec.seed, 0));
    const double e = spec.ground_extent;
    const int n = e > 0.0 && spec.ground_density > 0.0
                      ? sample_count(spec.ground_density, 4 * e * e)
                      : 0;
    std::uniform_real_distribution<double> coord(-e, e);
    for (int i = 0; i < n; ++i) {
      const double x = coord(rng);
      const double y = coord(rng);
      const Vec3 p(x, y, spec.ground_height);
      push(p, p);
    }
  }

  for (std::size_t k = 0; k < spec.boxes.size(); ++k) {
    const BoxSpec& box = spec.boxes[k];
    const BoxPose now = box_pose(box, t);
    const BoxPose next = box_pose(box, t + dt);
    for (const Vec3& local :
         box_surface(box, spec.surface_density, spec.sample_box_top, mix_seed(spec.seed, k + 1))) {
      push(to_world(now, local, spec.ground_height), to_world(next, local, spec.ground_height));
    }
  }
  return pc;
}

SceneSpec random_scene(int num_boxes, double half_extent, double max_speed,
                       std::uint64_t seed) {
  std::mt19937_64 rng(mix_seed(seed, 0x5ce7e));
  auto u = [&rng](double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
  };
  SceneSpec spec;
  spec.seed = seed;
  spec.ground_extent = half_extent + 2.0;
  for (int attempt = 0; attempt < 1000 && static_cast<int>(spec.boxes.size()) < num_boxes;
       ++attempt) {
    BoxSpec b;
    b.size = Vec3(u(2.0, 4.5), u(1.2, 2.2), u(1.0, 2.2));
    const double margin = b.size.x() / 2 + 0.5;
    b.center = Vec2(u(-half_extent + margin, half_extent - margin),
                    u(-half_extent + margin, half_extent - margin));
    b.yaw = u(-std::numbers::pi, std::numbers::pi);
    bool clear = true;
    for (const BoxSpec& other : spec.boxes) {
      const double reach = (b.size.head<2>().norm() + other.size.head<2>().norm()) / 2 + 1.0;
      if ((other.center - b.center).norm() < reach) clear = false;
    }
    if (!clear) continue;
    const bool parked = u(0.0, 1.0) < 0.25;
    const double speed = parked || max_speed <= 0.0 ? 0.0 : max_speed * u(0.25, 1.0);
    b.velocity = rotate(b.yaw, Vec2(speed, 0.0));
    b.yaw_rate = parked ? 0.0 : u(-0.2, 0.2);
    spec.boxes.push_back(b);
  }
  return spec;
}

}  // namespace cmotion
