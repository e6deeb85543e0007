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

#include "cmotion/run_config.h"

#include <array>
#include <fstream>
#include <stdexcept>

#include "cmotion/pcv_io.h"

namespace cmotion {

using nlohmann::json;

namespace {

template <typename T>
void read(const json& j, const char* key, T& into) {
  if (j.contains(key)) into = j.at(key).get<T>();
}

json vec2(const Vec2& v) { return json::array({v.x(), v.y()}); }
Vec2 vec2_from(const json& j) { return Vec2(j.at(0).get<double>(), j.at(1).get<double>()); }

struct AblationRow {
  const char* name;
  LossKind loss;
  bool ground_mask;
  bool gmf;
};

constexpr std::array<AblationRow, 5> kAblationRows = {{
    {"newcomer", LossKind::kPointInfoNce, false, false},
    {"a", LossKind::kSoftDiscriminative, false, false},
    {"b", LossKind::kSoftDiscriminative, false, true},
    {"c", LossKind::kSoftDiscriminative, true, true},
    {"d", LossKind::kPointInfoNce, true, true},
}};

}  // namespace

void RunConfig::finalize() {
  network.gated = use_gmf;
  grid.validate();
  augmentation.validate();
  if (patch_size <= 0) throw std::invalid_argument("patch_size must be positive");
  if (!(key_scale > 1.0)) throw std::invalid_argument("key_scale must exceed 1");
  if (frames < 0 || steps_per_epoch < 0) throw std::invalid_argument("counts must be >= 0");
  if (!(frame_dt > 0.0) || !(horizon > 0.0)) throw std::invalid_argument("frame_dt and horizon must be positive");
  if (loss.batch_size < 1 || loss.epochs < 0) throw std::invalid_argument("bad training schedule");
}

json to_json(const RunConfig& c) {
  json j;
  j["grid"] = {{"x_min", c.grid.x_min}, {"x_max", c.grid.x_max}, {"y_min", c.grid.y_min},
               {"y_max", c.grid.y_max}, {"dx", c.grid.dx},       {"dy", c.grid.dy}};
  j["augmentation"] = {{"max_shift", c.augmentation.max_shift},
                       {"max_rotation", c.augmentation.max_rotation},
                       {"max_scale", c.augmentation.max_scale},
                       {"max_jitter", c.augmentation.max_jitter},
                       {"removal_ratio", c.augmentation.removal_ratio}};
  j["loss"] = {{"kind", to_string(c.loss.kind)},
               {"epsilon", c.loss.epsilon},
               {"w_self", c.loss.w_self},
               {"w_neighbor", c.loss.w_neighbor},
               {"learning_rate", c.loss.learning_rate},
               {"weight_decay", c.loss.weight_decay},
               {"epochs", c.loss.epochs},
               {"batch_size", c.loss.batch_size}};
  j["network"] = {{"pfe_hidden", c.network.pfe_hidden},
                  {"pfe_out", c.network.pfe_out},
                  {"encoder_hidden", c.network.encoder_hidden},
                  {"feature_dim", c.network.feature_dim},
                  {"gate_hidden", c.network.gate_hidden}};
  j["patch"] = {{"size", c.patch_size}, {"key_scale", c.key_scale}};
  j["ablation"] = {{"use_gmf", c.use_gmf},
                   {"use_ground_mask", c.use_ground_mask},
                   {"loss", to_string(c.loss.kind)}};
  j["ground_threshold"] = c.ground_threshold;
  j["chamfer_refine"] = c.chamfer_refine;
  j["generate"] = {{"frames", c.frames},         {"frame_dt", c.frame_dt},
                   {"num_boxes", c.num_boxes},   {"max_speed", c.max_speed},
                   {"half_extent", c.half_extent}, {"ego_velocity", vec2(c.ego_velocity)}};
  j["steps_per_epoch"] = c.steps_per_epoch;
  j["horizon"] = c.horizon;
  j["static_speed"] = c.static_speed;
  j["scene_path"] = c.scene_path;
  j["output_dir"] = c.output_dir;
  j["seed"] = c.seed;
  return j;
}

RunConfig run_config_from_json(const json& j) {
  RunConfig c;
  if (j.contains("grid")) {
    const json& g = j["grid"];
    read(g, "x_min", c.grid.x_min);
    read(g, "x_max", c.grid.x_max);
    read(g, "y_min", c.grid.y_min);
    read(g, "y_max", c.grid.y_max);
    read(g, "dx", c.grid.dx);
    read(g, "dy", c.grid.dy);
  }
  if (j.contains("augmentation")) {
    const json& a = j["augmentation"];
    read(a, "max_shift", c.augmentation.max_shift);
    read(a, "max_rotation", c.augmentation.max_rotation);
    read(a, "max_scale", c.augmentation.max_scale);
    read(a, "max_jitter", c.augmentation.max_jitter);
    read(a, "removal_ratio", c.augmentation.removal_ratio);
  }
  if (j.contains("loss")) {
    const json& l = j["loss"];
    if (l.contains("kind")) c.loss.kind = loss_kind_from_string(l["kind"].get<std::string>());
    read(l, "epsilon", c.loss.epsilon);
    read(l, "w_self", c.loss.w_self);
    read(l, "w_neighbor", c.loss.w_neighbor);
    read(l, "learning_rate", c.loss.learning_rate);
    read(l, "weight_decay", c.loss.weight_decay);
    read(l, "epochs", c.loss.epochs);
    read(l, "batch_size", c.loss.batch_size);
  }
  if (j.contains("network")) {
    const json& n = j["network"];
    read(n, "pfe_hidden", c.network.pfe_hidden);
    read(n, "pfe_out", c.network.pfe_out);
    read(n, "encoder_hidden", c.network.encoder_hidden);
    read(n, "feature_dim", c.network.feature_dim);
    read(n, "gate_hidden", c.network.gate_hidden);
  }
  if (j.contains("patch")) {
    read(j["patch"], "size", c.patch_size);
    read(j["patch"], "key_scale", c.key_scale);
  }
  if (j.contains("ablation")) {
    const json& a = j["ablation"];
    read(a, "use_gmf", c.use_gmf);
    read(a, "use_ground_mask", c.use_ground_mask);
    if (a.contains("loss")) {
      const LossKind k = loss_kind_from_string(a["loss"].get<std::string>());
      if (j.contains("loss") && j["loss"].contains("kind") && k != c.loss.kind) {
        throw std::invalid_argument("ablation.loss contradicts loss.kind");
      }
      c.loss.kind = k;
    }
  }
  read(j, "ground_threshold", c.ground_threshold);
  read(j, "chamfer_refine", c.chamfer_refine);
  if (j.contains("generate")) {
    const json& g = j["generate"];
    read(g, "frames", c.frames);
    read(g, "frame_dt", c.frame_dt);
    read(g, "num_boxes", c.num_boxes);
    read(g, "max_speed", c.max_speed);
    read(g, "half_extent", c.half_extent);
    if (g.contains("ego_velocity")) c.ego_velocity = vec2_from(g["ego_velocity"]);
  }
  read(j, "steps_per_epoch", c.steps_per_epoch);
  read(j, "horizon", c.horizon);
  read(j, "static_speed", c.static_speed);
  read(j, "scene_path", c.scene_path);
  read(j, "output_dir", c.output_dir);
  read(j, "seed", c.seed);
  c.loss.seed = c.seed;
  return c;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open config: " + path.string());
  try {
    return run_config_from_json(json::parse(in));
  } catch (const json::exception& e) {
    throw DataError("bad config " + path.string() + ": " + e.what());
  }
}

void save_run_config(const std::filesystem::path& path, const RunConfig& cfg) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write config: " + path.string());
  out << to_json(cfg).dump(2) << '\n';
}

json to_json(const SceneSpec& s) {
  json boxes = json::array();
  for (const BoxSpec& b : s.boxes) {
    boxes.push_back({{"center", vec2(b.center)},
                     {"yaw", b.yaw},
                     {"size", json::array({b.size.x(), b.size.y(), b.size.z()})},
                     {"velocity", vec2(b.velocity)},
                     {"yaw_rate", b.yaw_rate}});
  }
  return {{"ground_extent", s.ground_extent},
          {"ground_height", s.ground_height},
          {"ground_density", s.ground_density},
          {"surface_density", s.surface_density},
          {"sample_box_top", s.sample_box_top},
          {"ego_velocity", vec2(s.ego_velocity)},
          {"seed", s.seed},
          {"boxes", boxes}};
}

SceneSpec scene_spec_from_json(const json& j) {
  SceneSpec s;
  read(j, "ground_extent", s.ground_extent);
  read(j, "ground_height", s.ground_height);
  read(j, "ground_density", s.ground_density);
  read(j, "surface_density", s.surface_density);
  read(j, "sample_box_top", s.sample_box_top);
  if (j.contains("ego_velocity")) s.ego_velocity = vec2_from(j["ego_velocity"]);
  read(j, "seed", s.seed);
  if (j.contains("boxes")) {
    for (const json& b : j["boxes"]) {
      BoxSpec box;
      box.center = vec2_from(b.at("center"));
      read(b, "yaw", box.yaw);
      const json& sz = b.at("size");
      box.size = Vec3(sz.at(0).get<double>(), sz.at(1).get<double>(), sz.at(2).get<double>());
      if (b.contains("velocity")) box.velocity = vec2_from(b["velocity"]);
      read(b, "yaw_rate", box.yaw_rate);
      s.boxes.push_back(box);
    }
  }
  s.validate();
  return s;
}

SceneSpec load_scene_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open scene spec: " + path.string());
  try {
    return scene_spec_from_json(json::parse(in));
  } catch (const json::exception& e) {
    throw DataError("bad scene spec " + path.string() + ": " + e.what());
  }
}

void save_scene_spec(const std::filesystem::path& path, const SceneSpec& spec) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write scene spec: " + path.string());
  out << to_json(spec).dump(2) << '\n';
}

void apply_ablation_row(RunConfig& cfg, const std::string& row) {
  for (const AblationRow& r : kAblationRows) {
    if (row != r.name) continue;
    cfg.loss.kind = r.loss;
    cfg.use_ground_mask = r.ground_mask;
    cfg.use_gmf = r.gmf;
    cfg.network.gated = r.gmf;
    return;
  }
  throw std::invalid_argument("unknown ablation row: " + row);
}

std::optional<std::string> ablation_row_of(const RunConfig& cfg) {
  for (const AblationRow& r : kAblationRows) {
    if (cfg.loss.kind == r.loss && cfg.use_ground_mask == r.ground_mask && cfg.use_gmf == r.gmf) {
      return std::string(r.name);
    }
  }
  return std::nullopt;
}

}  // namespace cmotion
