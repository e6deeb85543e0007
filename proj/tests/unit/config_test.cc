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

#include <cstring>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "cmotion/checkpoint.h"
#include "cmotion/pcv_io.h"
#include "cmotion/pipeline.h"
#include "cmotion/run_config.h"
#include "test_util.h"

namespace cmotion {
namespace {

TEST(RunConfigTest, DefaultsMatchReferenceSettings) {
  const RunConfig c;
  EXPECT_EQ(c.grid.rows(), 256);
  EXPECT_EQ(c.patch_size, 32);
  EXPECT_EQ(c.key_scale, 2.0);
  EXPECT_EQ(c.loss.learning_rate, 0.001);
  EXPECT_EQ(c.loss.weight_decay, 0.001);
  EXPECT_EQ(c.loss.w_self, 0.6);
  EXPECT_EQ(c.loss.w_neighbor, 0.1);
  EXPECT_EQ(c.network.feature_dim, 32);
  EXPECT_EQ(c.augmentation.max_shift, 3.0);
  EXPECT_EQ(c.augmentation.max_rotation, 0.17);
  EXPECT_EQ(c.augmentation.max_scale, 1.05);
  EXPECT_EQ(c.augmentation.max_jitter, 0.1);
}

TEST(RunConfigTest, JsonRoundTrip) {
  RunConfig c;
  c.grid = GridSpec::square(8.0, 0.25);
  c.patch_size = 16;
  c.loss.kind = LossKind::kPointInfoNce;
  c.use_gmf = false;
  c.ego_velocity = Vec2(1.0, -0.5);
  c.seed = 99;
  const RunConfig back = run_config_from_json(to_json(c));
  EXPECT_EQ(to_json(back), to_json(c));
  EXPECT_EQ(back.loss.seed, 99u);
}

TEST(RunConfigTest, ContradictoryLossKindsRejected) {
  nlohmann::json j = to_json(RunConfig{});
  j["loss"]["kind"] = "sd";
  j["ablation"]["loss"] = "pointinfonce";
  EXPECT_THROW(run_config_from_json(j), std::invalid_argument);
}

TEST(RunConfigTest, FinalizeCopiesGmfSwitch) {
  RunConfig c;
  c.use_gmf = false;
  c.finalize();
  EXPECT_FALSE(c.network.gated);
  c.patch_size = 0;
  EXPECT_THROW(c.finalize(), std::invalid_argument);
}

TEST(AblationTest, EveryRowIsExpressibleAndUnique) {
  const std::vector<std::string> rows{"newcomer", "a", "b", "c", "d"};
  std::set<std::string> seen;
  for (const std::string& row : rows) {
    RunConfig c;
    apply_ablation_row(c, row);
    EXPECT_EQ(ablation_row_of(c), row);
    const RunConfig back = run_config_from_json(to_json(c));
    EXPECT_EQ(ablation_row_of(back), row);
    seen.insert(to_json(c)["ablation"].dump());
  }
  EXPECT_EQ(seen.size(), rows.size());
  RunConfig c;
  apply_ablation_row(c, "c");
  EXPECT_EQ(c.loss.kind, LossKind::kSoftDiscriminative);
  EXPECT_TRUE(c.use_gmf);
  EXPECT_TRUE(c.use_ground_mask);
  apply_ablation_row(c, "d");
  EXPECT_EQ(c.loss.kind, LossKind::kPointInfoNce);
  EXPECT_THROW(apply_ablation_row(c, "e"), std::invalid_argument);
}

TEST(SceneSpecJsonTest, RoundTrip) {
  SceneSpec s = random_scene(3, 6.0, 3.0, 12);
  s.ego_velocity = Vec2(0.5, 0.0);
  const SceneSpec back = scene_spec_from_json(to_json(s));
  EXPECT_EQ(to_json(back), to_json(s));
  const PointCloud a = synth_scene(s, 0.5, 0.5), b = synth_scene(back, 0.5, 0.5);
  EXPECT_EQ(std::memcmp(a.points.data(), b.points.data(), a.size() * sizeof(Vec3)), 0);
}

TEST(CheckpointTest, RoundTripAtFloatPrecision) {
  NetworkDims d;
  d.pfe_hidden = 8;
  d.encoder_hidden = 8;
  const ModelParams p = ModelParams::init(d, 5);
  std::stringstream ss;
  write_checkpoint(ss, p, {5, 17});
  CheckpointMeta meta;
  const ModelParams back = read_checkpoint(ss, &meta);
  EXPECT_EQ(meta.seed, 5u);
  EXPECT_EQ(meta.steps, 17u);
  EXPECT_EQ(back.dims, p.dims);
  std::vector<std::vector<double>> a, b;
  p.for_each_block([&](const std::string&, const std::vector<double>& v) { a.push_back(v); });
  back.for_each_block([&](const std::string&, const std::vector<double>& v) { b.push_back(v); });
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t k = 0; k < a[i].size(); ++k) {
      EXPECT_EQ(b[i][k], static_cast<double>(static_cast<float>(a[i][k])));
    }
  }
  // Writing the reloaded parameters reproduces the same bytes.
  std::stringstream s1, s2;
  write_checkpoint(s1, p, {5, 17});
  write_checkpoint(s2, back, {5, 17});
  EXPECT_EQ(s1.str(), s2.str());
}

TEST(CheckpointTest, UngatedHasNoGateBlocks) {
  NetworkDims d;
  d.gated = false;
  std::stringstream ss;
  write_checkpoint(ss, ModelParams::init(d, 1), {});
  EXPECT_EQ(ss.str().find("gate."), std::string::npos);
}

TEST(CheckpointTest, RejectsCorruptInput) {
  std::stringstream bad("CMCK9 2\n{}");
  EXPECT_THROW(read_checkpoint(bad), DataError);
  std::stringstream ss;
  write_checkpoint(ss, ModelParams::init(NetworkDims{}, 1), {});
  std::string s = ss.str();
  s.resize(s.size() - 10);
  std::stringstream truncated(s);
  EXPECT_THROW(read_checkpoint(truncated), DataError);
}

TEST(PillarTableTest, CsvRoundTrip) {
  const std::vector<PillarMotion> rows{{1, 2, Vec2(0.25, -0.5)}, {3, 4, Vec2(0.1, 1e-17)}};
  std::stringstream ss;
  write_pillar_table(ss, rows);
  const auto back = read_pillar_table(ss);
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[1].row, 3);
  EXPECT_EQ(back[1].displacement, rows[1].displacement);
  std::stringstream bad("a,b\n");
  EXPECT_THROW(read_pillar_table(bad), DataError);
}

TEST(PipelineTest, GroundMaskForcesZeroFlowOnGround) {
  RunConfig cfg;
  cfg.grid = GridSpec::square(4.0, 0.25);
  cfg.patch_size = 8;
  cfg.use_ground_mask = true;
  cfg.network.pfe_hidden = cfg.network.pfe_out = cfg.network.encoder_hidden = 8;
  cfg.network.feature_dim = cfg.network.gate_hidden = 8;
  cfg.finalize();
  SceneSpec s = random_scene(2, 2.5, 3.0, 3);
  s.ground_extent = 4.0;
  const PointCloud a = synth_scene(s, 0.0, 0.5), b = synth_scene(s, 0.5, 0.5);
  const ModelParams p = ModelParams::init(cfg.network, 4);
  const InferenceOutput out = infer_flow(p, cfg, a, b, ego_transform(s, 0.5));
  ASSERT_EQ(out.point_flow.size(), a.size());
  std::size_t ground = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(out.ground_mask[i], a.points[i].z() <= cfg.ground_threshold);
    if (out.ground_mask[i]) {
      EXPECT_EQ(out.point_flow[i], Vec3::Zero());
      ++ground;
    }
    EXPECT_EQ(out.point_flow[i].z(), 0.0);
  }
  EXPECT_GT(ground, 0u);
}

TEST(PipelineTest, PillarGroundTruthAveragesForegroundFlow) {
  SceneSpec s;
  s.ground_extent = 3.0;
  BoxSpec b;
  b.size = Vec3(1.0, 1.0, 1.0);
  b.velocity = Vec2(2.0, 0.0);
  s.boxes.push_back(b);
  const PointCloud pc = synth_scene(s, 0.0, 0.5);
  const auto rows = pillar_ground_truth(pc, GridSpec::square(3.0, 0.25), 0.3);
  ASSERT_FALSE(rows.empty());
  for (const PillarMotion& r : rows) EXPECT_NEAR(r.displacement.x(), 1.0, 1e-12);
}

}  // namespace
}  // namespace cmotion
