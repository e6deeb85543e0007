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

#ifndef CMOTION_PIPELINE_H_
#define CMOTION_PIPELINE_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "cmotion/association.h"
#include "cmotion/network.h"
#include "cmotion/patch_layout.h"
#include "cmotion/run_config.h"
#include "cmotion/trainer.h"

namespace cmotion {

// Scene described by cfg.scene_path, or a random one seeded from cfg.seed.
SceneSpec scene_for(const RunConfig& cfg);
PointCloud scene_frame(const SceneSpec& spec, const RunConfig& cfg, int index);

// Training pair from one frame: optional ground removal, then augmentation with
// a per-step seed.
TrainingSample make_training_sample(const PointCloud& frame, const RunConfig& cfg,
                                    std::uint64_t seed);

SampleSource frame_sample_source(std::vector<PointCloud> frames, const RunConfig& cfg);

struct InferenceOutput {
  PatchLayout layout;
  Pillarization pill_t;   // over the network input (foreground when ground masking)
  Pillarization pill_t1;  // ego-compensated frame t+1 input
  AssociationResult assoc;
  FlowField flow;
  std::vector<Vec3> point_flow;  // one per point of the full frame-t cloud
  std::vector<bool> ground_mask;
  GateMap m_t;
  GateMap m_t1;
};

// Full inference on a frame pair. `ego` maps frame t+1 sensor coordinates into
// frame t; it is applied to the t+1 points before pillarization.
InferenceOutput infer_flow(const ModelParams& params, const RunConfig& cfg, const PointCloud& pc_t,
                           const PointCloud& pc_t1,
                           const RigidTransform& ego = RigidTransform::identity());

// Per-pillar displacement table rows.
struct PillarMotion {
  int row;
  int col;
  Vec2 displacement;
};

// Mean xy ground-truth flow of the non-ground points in every non-empty pillar.
std::vector<PillarMotion> pillar_ground_truth(const PointCloud& pc, const GridSpec& grid,
                                              double ground_threshold);
// Predicted flow at each non-empty pillar of `cells`; unmatched pillars report zero.
std::vector<PillarMotion> pillar_table(const FlowField& flow, const std::vector<int>& cells);

// CSV with header `row,col,dx,dy`.
void write_pillar_table(std::ostream& out, const std::vector<PillarMotion>& rows);
std::vector<PillarMotion> read_pillar_table(std::istream& in);
void save_pillar_table(const std::filesystem::path& path, const std::vector<PillarMotion>& rows);
std::vector<PillarMotion> load_pillar_table(const std::filesystem::path& path);

}  // namespace cmotion

#endif  // CMOTION_PIPELINE_H_
