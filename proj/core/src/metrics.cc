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

#include "cmotion/metrics.h"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace cmotion {

double relative_error(const Vec3& pred, const Vec3& gt) {
  const double err = (pred - gt).norm();
  const double mag = gt.norm();
  if (mag == 0.0) return err == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return err / mag;
}

SceneFlowMetrics scene_flow_metrics(const std::vector<Vec3>& pred, const std::vector<Vec3>& gt) {
  if (pred.size() != gt.size()) throw std::invalid_argument("scene_flow_metrics: length mismatch");
  if (pred.empty()) throw std::invalid_argument("scene_flow_metrics: empty input");
  SceneFlowMetrics m;
  m.count = pred.size();
  std::size_t strict = 0, relaxed = 0, outliers = 0;
  double epe = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const double err = (pred[i] - gt[i]).norm();
    const double rel = relative_error(pred[i], gt[i]);
    epe += err;
    if (err < 0.05 || rel < 0.05) ++strict;
    if (err < 0.1 || rel < 0.1) ++relaxed;
    if (err > 0.3 || rel > 0.1) ++outliers;
  }
  const double n = static_cast<double>(m.count);
  m.epe3d = epe / n;
  m.acc3d_strict = static_cast<double>(strict) / n;
  m.acc3d_relaxed = static_cast<double>(relaxed) / n;
  m.outliers3d = static_cast<double>(outliers) / n;
  return m;
}

const char* to_string(SpeedGroup g) {
  switch (g) {
    case SpeedGroup::kStatic: return "static";
    case SpeedGroup::kSlow: return "slow";
    case SpeedGroup::kFast: return "fast";
  }
  return "?";
}

std::vector<SpeedGroup> speed_groups(const std::vector<Vec2>& gt_displacement, double dt,
                                     const SpeedThresholds& thresholds) {
  if (!(dt > 0.0)) throw std::invalid_argument("speed_groups: dt must be positive");
  std::vector<SpeedGroup> out;
  out.reserve(gt_displacement.size());
  for (const Vec2& d : gt_displacement) {
    const double speed = d.norm() / dt;
    if (speed < thresholds.static_speed) {
      out.push_back(SpeedGroup::kStatic);
    } else if (speed <= thresholds.slow_speed) {
      out.push_back(SpeedGroup::kSlow);
    } else {
      out.push_back(SpeedGroup::kFast);
    }
  }
  return out;
}

std::vector<Vec2> extrapolate_motion(const std::vector<Vec2>& previous,
                                     const std::vector<Vec2>& latest, double frame_dt,
                                     double horizon) {
  if (previous.size() != latest.size()) throw std::invalid_argument("extrapolate_motion: length mismatch");
  if (!(frame_dt > 0.0) || !(horizon > 0.0)) {
    throw std::invalid_argument("extrapolate_motion: frame_dt and horizon must be positive");
  }
  std::vector<Vec2> out(latest.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const Vec2 velocity = (previous[i] + latest[i]) / 2.0 / frame_dt;
    out[i] = velocity * horizon;
  }
  return out;
}

MotionMetrics motion_prediction_metrics(const std::vector<Vec2>& pred_future,
                                        const std::vector<Vec2>& gt_future,
                                        const std::vector<SpeedGroup>& groups) {
  if (pred_future.size() != gt_future.size() || groups.size() != gt_future.size()) {
    throw std::invalid_argument("motion_prediction_metrics: length mismatch");
  }
  if (pred_future.empty()) throw std::invalid_argument("motion_prediction_metrics: empty input");
  std::array<std::vector<double>, kNumSpeedGroups> errors;
  for (std::size_t i = 0; i < pred_future.size(); ++i) {
    errors[static_cast<int>(groups[i])].push_back((pred_future[i] - gt_future[i]).norm());
  }
  MotionMetrics m;
  for (int g = 0; g < kNumSpeedGroups; ++g) {
    std::vector<double>& e = errors[g];
    if (e.empty()) continue;
    GroupError ge;
    ge.count = e.size();
    double sum = 0.0;
    for (double v : e) sum += v;
    ge.mean = sum / static_cast<double>(e.size());
    std::sort(e.begin(), e.end());
    const std::size_t mid = e.size() / 2;
    ge.median = e.size() % 2 ? e[mid] : (e[mid - 1] + e[mid]) / 2.0;
    m.groups[g] = ge;
  }
  return m;
}

void write_report(std::ostream& out, const SceneFlowMetrics& m) {
  out << std::setprecision(10);
  out << "mode: sceneflow\n"
      << "count: " << m.count << "\n"
      << "EPE3D: " << m.epe3d << "\n"
      << "Acc3DS: " << m.acc3d_strict << "\n"
      << "Acc3DR: " << m.acc3d_relaxed << "\n"
      << "Outliers3D: " << m.outliers3d << "\n";
}

void write_report(std::ostream& out, const MotionMetrics& m) {
  out << std::setprecision(10) << "mode: motion\n";
  for (int g = 0; g < kNumSpeedGroups; ++g) {
    const char* name = to_string(static_cast<SpeedGroup>(g));
    if (!m.groups[g]) {
      out << name << ": absent\n";
      continue;
    }
    out << name << ".count: " << m.groups[g]->count << "\n"
        << name << ".mean: " << m.groups[g]->mean << "\n"
        << name << ".median: " << m.groups[g]->median << "\n";
  }
}

void write_csv(std::ostream& out, const SceneFlowMetrics& m, bool header) {
  if (header) out << "EPE3D,Acc3DS,Acc3DR,Outliers3D\n";
  out << std::setprecision(10) << m.epe3d << ',' << m.acc3d_strict << ',' << m.acc3d_relaxed << ','
      << m.outliers3d << '\n';
}

void write_csv(std::ostream& out, const MotionMetrics& m, bool header) {
  if (header) out << "static_mean,static_median,slow_mean,slow_median,fast_mean,fast_median\n";
  out << std::setprecision(10);
  for (int g = 0; g < kNumSpeedGroups; ++g) {
    if (g) out << ',';
    if (m.groups[g]) {
      out << m.groups[g]->mean << ',' << m.groups[g]->median;
    } else {
      out << ',';
    }
  }
  out << '\n';
}

}  // namespace cmotion
