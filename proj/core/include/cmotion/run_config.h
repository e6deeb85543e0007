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

#ifndef CMOTION_RUN_CONFIG_H_
#define CMOTION_RUN_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "cmotion/augmentation.h"
#include "cmotion/grid.h"
#include "cmotion/loss.h"
#include "cmotion/network.h"
#include "cmotion/synthetic_scene.h"

namespace cmotion {

// Everything a run needs, serialized as one JSON document. Fields missing
// from the document keep their defaults.
struct RunConfig {
  GridSpec grid;
  AugmentationSpec augmentation;
  LossConfig loss;
  NetworkDims network;
  int patch_size = 32;
  double key_scale = 2.0;

  // Ablation switches.
  bool use_gmf = true;
  bool use_ground_mask = true;

  double ground_threshold = 0.3;
  bool chamfer_refine = false;

  // Synthetic data generation.
  int frames = 10;
  double frame_dt = 0.5;
  int num_boxes = 4;
  double max_speed = 3.0;
  double half_extent = 0.0;  // box placement range; <= 0 uses 3/4 of the grid half-width
  Vec2 ego_velocity = Vec2::Zero();

  // Training schedule.
  int steps_per_epoch = 100;

  // Motion prediction.
  double horizon = 1.0;
  double static_speed = 0.2;

  std::string scene_path;
  std::string output_dir = "run";
  std::uint64_t seed = 0;

  // Copies ablation switches into the dependent sub-configs and validates.
  void finalize();
};

nlohmann::json to_json(const RunConfig& cfg);
RunConfig run_config_from_json(const nlohmann::json& j);
RunConfig load_run_config(const std::filesystem::path& path);
void save_run_config(const std::filesystem::path& path, const RunConfig& cfg);

nlohmann::json to_json(const SceneSpec& spec);
SceneSpec scene_spec_from_json(const nlohmann::json& j);
SceneSpec load_scene_spec(const std::filesystem::path& path);
void save_scene_spec(const std::filesystem::path& path, const SceneSpec& spec);

// Ablation rows: "newcomer" (PointInfoNCE only), "a" (SD-Loss), "b" (SD + GMF),
// "c" (SD + ground mask + GMF), "d" (PointInfoNCE + ground mask + GMF).
void apply_ablation_row(RunConfig& cfg, const std::string& row);
std::optional<std::string> ablation_row_of(const RunConfig& cfg);

}  // namespace cmotion

#endif  // CMOTION_RUN_CONFIG_H_
