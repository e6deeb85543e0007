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

#include "cmotion/pipeline.h"

#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

#include "cmotion/augmentation.h"
#include "cmotion/pcv_io.h"
#include "cmotion/random.h"

namespace cmotion {

SceneSpec scene_for(const RunConfig& cfg) {
  if (!cfg.scene_path.empty()) return load_scene_spec(cfg.scene_path);
  const double grid_half = std::min(cfg.grid.x_max - cfg.grid.x_min, cfg.grid.y_max - cfg.grid.y_min) / 2;
  const double half = cfg.half_extent > 0.0 ? cfg.half_extent : 0.75 * grid_half;
  SceneSpec spec = random_scene(cfg.num_boxes, half, cfg.max_speed, cfg.seed);
  spec.ground_extent = grid_half;
  spec.ego_velocity = cfg.ego_velocity;
  return spec;
}

PointCloud scene_frame(const SceneSpec& spec, const RunConfig& cfg, int index) {
  return synth_scene(spec, index * cfg.frame_dt, cfg.frame_dt);
}

TrainingSample make_training_sample(const PointCloud& frame, const RunConfig& cfg,
                                    std::uint64_t seed) {
  const PointCloud input =
      cfg.use_ground_mask ? remove_ground(frame, cfg.ground_threshold).foreground : frame;
  AugmentedPair pair = generate_pair(input, cfg.augmentation, seed);
  return {std::move(pair.pc_t), std::move(pair.pc_t1), pair.transform};
}

SampleSource frame_sample_source(std::vector<PointCloud> frames, const RunConfig& cfg) {
  if (frames.empty()) throw std::invalid_argument("no training frames");
  return [frames = std::move(frames), cfg](std::size_t step) {
    return make_training_sample(frames[step % frames.size()], cfg, mix_seed(cfg.seed, step));
  };
}

InferenceOutput infer_flow(const ModelParams& params, const RunConfig& cfg, const PointCloud& pc_t,
                           const PointCloud& pc_t1, const RigidTransform& ego) {
  InferenceOutput out;
  out.layout = build_layout(cfg.grid, cfg.patch_size, cfg.key_scale);

  PointCloud in_t = pc_t;
  PointCloud in_t1 = apply_transform(pc_t1, ego);
  std::vector<int> fg_index;
  if (cfg.use_ground_mask) {
    GroundSplit split_t = remove_ground(pc_t, cfg.ground_threshold);
    out.ground_mask = std::move(split_t.ground_mask);
    fg_index = std::move(split_t.foreground_index);
    in_t = std::move(split_t.foreground);
    in_t1 = remove_ground(in_t1, cfg.ground_threshold).foreground;
  }

  out.pill_t = pillarize(in_t, cfg.grid);
  out.pill_t1 = pillarize(in_t1, cfg.grid);
  const PointFeatures feat_t = pfe_point_features(in_t, out.pill_t);
  const PointFeatures feat_t1 = pfe_point_features(in_t1, out.pill_t1);

  const FeatureMap f_t = encoder_forward(params, pfe_forward(params, out.pill_t, feat_t));
  const FeatureMap f_t1 = encoder_forward(params, pfe_forward(params, out.pill_t1, feat_t1));
  GmfOutput fused = gmf(params, f_t, f_t1);
  out.m_t = std::move(fused.m_t);
  out.m_t1 = std::move(fused.m_t1);
  const FeatureMap z_t = relu_embed(fused.z_t);
  const FeatureMap z_t1 = relu_embed(fused.z_t1);

  out.assoc = associate(z_t, z_t1, out.pill_t, out.pill_t1, out.layout);
  out.flow = pillar_flow(out.assoc, cfg.grid);
  out.point_flow = scatter_to_points(out.flow, pillarize(pc_t, cfg.grid), out.ground_mask);

  if (cfg.chamfer_refine) {
    std::vector<Vec3> fallback(in_t.size());
    for (std::size_t i = 0; i < in_t.size(); ++i) {
      fallback[i] = out.point_flow[fg_index.empty() ? i : static_cast<std::size_t>(fg_index[i])];
    }
    const std::vector<Vec3> refined = chamfer_refine(in_t, in_t1, out.assoc, out.flow, out.pill_t,
                                                     out.pill_t1, fallback, mix_seed(cfg.seed, 0xc4a));
    for (std::size_t i = 0; i < in_t.size(); ++i) {
      out.point_flow[fg_index.empty() ? i : static_cast<std::size_t>(fg_index[i])] = refined[i];
    }
  }
  return out;
}

std::vector<PillarMotion> pillar_ground_truth(const PointCloud& pc, const GridSpec& grid,
                                              double ground_threshold) {
  if (!pc.has_flow()) throw DataError("cloud carries no ground-truth flow");
  const GroundSplit split = remove_ground(pc, ground_threshold);
  const Pillarization pill = pillarize(split.foreground, grid);
  std::vector<PillarMotion> rows;
  for (int cell : pill.non_empty_cells()) {
    Vec2 sum = Vec2::Zero();
    const auto pts = pill.points_in(cell);
    for (int i : pts) sum += split.foreground.flow[i].head<2>();
    rows.push_back({cell / pill.cols(), cell % pill.cols(), sum / static_cast<double>(pts.size())});
  }
  return rows;
}

std::vector<PillarMotion> pillar_table(const FlowField& flow, const std::vector<int>& cells) {
  std::vector<PillarMotion> rows;
  rows.reserve(cells.size());
  for (int cell : cells) rows.push_back({cell / flow.cols, cell % flow.cols, flow.pillar[cell]});
  return rows;
}

void write_pillar_table(std::ostream& out, const std::vector<PillarMotion>& rows) {
  out << "row,col,dx,dy\n" << std::setprecision(17);
  for (const PillarMotion& r : rows) {
    out << r.row << ',' << r.col << ',' << r.displacement.x() << ',' << r.displacement.y() << '\n';
  }
}

std::vector<PillarMotion> read_pillar_table(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("row,col,dx,dy", 0) != 0) {
    throw DataError("pillar table lacks the row,col,dx,dy header");
  }
  std::vector<PillarMotion> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    PillarMotion r{};
    char c1 = 0, c2 = 0, c3 = 0;
    double dx = 0, dy = 0;
    if (!(ls >> r.row >> c1 >> r.col >> c2 >> dx >> c3 >> dy) || c1 != ',' || c2 != ',' || c3 != ',') {
      throw DataError("malformed pillar table line: " + line);
    }
    r.displacement = Vec2(dx, dy);
    rows.push_back(r);
  }
  return rows;
}

void save_pillar_table(const std::filesystem::path& path, const std::vector<PillarMotion>& rows) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write: " + path.string());
  write_pillar_table(out, rows);
}

std::vector<PillarMotion> load_pillar_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open: " + path.string());
  return read_pillar_table(in);
}

}  // namespace cmotion
