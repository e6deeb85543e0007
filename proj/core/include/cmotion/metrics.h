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

#ifndef CMOTION_METRICS_H_
#define CMOTION_METRICS_H_

#include <array>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cmotion/point_cloud.h"

namespace cmotion {

struct SceneFlowMetrics {
  double epe3d = 0.0;
  double acc3d_strict = 0.0;
  double acc3d_relaxed = 0.0;
  double outliers3d = 0.0;
  std::size_t count = 0;
};

// EPE3D plus thresholded ratios:
//   strict:   err < 0.05 m or rel < 5%
//   relaxed:  err < 0.10 m or rel < 10%
//   outlier:  err > 0.30 m or rel > 10%
// with rel = err / |gt|, taken as 0 when gt = pred = 0 and +inf when only gt = 0.
SceneFlowMetrics scene_flow_metrics(const std::vector<Vec3>& pred, const std::vector<Vec3>& gt);

double relative_error(const Vec3& pred, const Vec3& gt);

enum class SpeedGroup { kStatic = 0, kSlow = 1, kFast = 2 };
inline constexpr int kNumSpeedGroups = 3;
const char* to_string(SpeedGroup g);

struct SpeedThresholds {
  double static_speed = 0.2;  // m/s; strictly below is static
  double slow_speed = 5.0;    // m/s; at or below (and not static) is slow
};

std::vector<SpeedGroup> speed_groups(const std::vector<Vec2>& gt_displacement, double dt,
                                     const SpeedThresholds& thresholds = {});

// Constant-velocity extrapolation from the two most recent per-pillar
// displacements, each spanning frame_dt seconds.
std::vector<Vec2> extrapolate_motion(const std::vector<Vec2>& previous,
                                     const std::vector<Vec2>& latest, double frame_dt,
                                     double horizon);

struct GroupError {
  double mean = 0.0;
  double median = 0.0;
  std::size_t count = 0;
};

struct MotionMetrics {
  std::array<std::optional<GroupError>, kNumSpeedGroups> groups;  // empty group -> nullopt
};

MotionMetrics motion_prediction_metrics(const std::vector<Vec2>& pred_future,
                                        const std::vector<Vec2>& gt_future,
                                        const std::vector<SpeedGroup>& groups);

// Key-value report and CSV row renderings.
void write_report(std::ostream& out, const SceneFlowMetrics& m);
void write_report(std::ostream& out, const MotionMetrics& m);
// Columns: EPE3D,Acc3DS,Acc3DR,Outliers3D
void write_csv(std::ostream& out, const SceneFlowMetrics& m, bool header = true);
// Columns: static_mean,static_median,slow_mean,slow_median,fast_mean,fast_median
void write_csv(std::ostream& out, const MotionMetrics& m, bool header = true);

}  // namespace cmotion

#endif  // CMOTION_METRICS_H_
