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

#include "cli.h"

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "CLI11.hpp"
#include "cmotion/checkpoint.h"
#include "cmotion/metrics.h"
#include "cmotion/pcv_io.h"
#include "cmotion/pipeline.h"

namespace cmotion::cli {

namespace fs = std::filesystem;

namespace {

constexpr const char* kSeedEnv = "CONTRASTMOTION_SEED";

fs::path frame_name(int index) {
  std::ostringstream os;
  os << "frame_" << std::setw(4) << std::setfill('0') << index << ".pcv";
  return os.str();
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw DataError("cannot create directory " + dir.string());
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  return out;
}

void require_file(const fs::path& path, const char* what) {
  if (path.empty() || !fs::is_regular_file(path)) {
    throw UsageError(std::string(what) + " not found: " + path.string());
  }
}

std::vector<PointCloud> load_manifest_frames(const fs::path& dir) {
  std::ifstream in(dir / "manifest.json");
  if (!in) throw DataError("no manifest.json in " + dir.string());
  const nlohmann::json m = nlohmann::json::parse(in);
  std::vector<PointCloud> frames;
  for (const auto& name : m.at("frames")) frames.push_back(load_point_cloud(dir / name.get<std::string>()));
  return frames;
}

// Explicitly given command-line overrides.
struct Overrides {
  std::string config;
  std::string output;
  std::optional<std::uint64_t> seed;
  std::string ablation_row;
  std::string loss;
  std::optional<bool> gmf;
  std::optional<bool> ground_mask;
  std::optional<int> epochs;
  std::optional<int> steps_per_epoch;
  std::optional<int> frames;
  std::optional<double> learning_rate;
};

void add_common(CLI::App* app, Overrides& o) {
  app->add_option("-c,--config", o.config, "JSON run configuration");
  app->add_option("-o,--output", o.output, "Output directory");
  app->add_option("--seed", o.seed, "Seed (overrides the config and " + std::string(kSeedEnv) + ")");
  app->add_option("--ablation-row", o.ablation_row, "Ablation row: newcomer, a, b, c or d");
  app->add_option("--loss", o.loss, "Loss: sd or pointinfonce");
  app->add_flag("--gmf,!--no-gmf", o.gmf, "Enable gated multi-frame fusion");
  app->add_flag("--ground-mask,!--no-ground-mask", o.ground_mask, "Remove ground before matching");
}

RunConfig resolve_config(const Overrides& o) {
  RunConfig cfg;
  if (!o.config.empty()) {
    require_file(o.config, "config");
    cfg = load_run_config(o.config);
  }
  if (const char* env = std::getenv(kSeedEnv)) {
    try {
      std::size_t used = 0;
      const std::string s(env);
      cfg.seed = std::stoull(s, &used);
      if (used != s.size()) throw std::invalid_argument(s);
    } catch (const std::exception&) {
      throw UsageError(std::string(kSeedEnv) + " is not an unsigned integer");
    }
  }
  if (o.seed) cfg.seed = *o.seed;
  cfg.loss.seed = cfg.seed;

  std::optional<LossKind> loss;
  if (!o.loss.empty()) {
    try {
      loss = loss_kind_from_string(o.loss);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }
  if (!o.ablation_row.empty()) {
    try {
      apply_ablation_row(cfg, o.ablation_row);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    if ((loss && *loss != cfg.loss.kind) || (o.gmf && *o.gmf != cfg.use_gmf) ||
        (o.ground_mask && *o.ground_mask != cfg.use_ground_mask)) {
      throw UsageError("flags contradict --ablation-row " + o.ablation_row);
    }
  }
  if (loss) cfg.loss.kind = *loss;
  if (o.gmf) cfg.use_gmf = *o.gmf;
  if (o.ground_mask) cfg.use_ground_mask = *o.ground_mask;
  if (o.epochs) cfg.loss.epochs = *o.epochs;
  if (o.steps_per_epoch) cfg.steps_per_epoch = *o.steps_per_epoch;
  if (o.frames) cfg.frames = *o.frames;
  if (o.learning_rate) cfg.loss.learning_rate = *o.learning_rate;
  if (!o.output.empty()) cfg.output_dir = o.output;
  try {
    cfg.finalize();
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("invalid configuration: ") + e.what());
  }
  return cfg;
}

std::pair<int, int> parse_cell(const std::string& s) {
  const auto comma = s.find(',');
  try {
    if (comma == std::string::npos) throw std::invalid_argument(s);
    return {std::stoi(s.substr(0, comma)), std::stoi(s.substr(comma + 1))};
  } catch (const std::exception&) {
    throw UsageError("expected ROW,COL but got '" + s + "'");
  }
}

}  // namespace

void cmd_generate(const RunConfig& cfg, std::ostream& log) {
  const fs::path dir = cfg.output_dir;
  ensure_dir(dir);
  const SceneSpec scene = scene_for(cfg);
  save_scene_spec(dir / "scene.json", scene);
  nlohmann::json manifest;
  manifest["seed"] = cfg.seed;
  manifest["frame_dt"] = cfg.frame_dt;
  manifest["frames"] = nlohmann::json::array();
  for (int f = 0; f < cfg.frames; ++f) {
    const fs::path name = frame_name(f);
    save_point_cloud(dir / name, scene_frame(scene, cfg, f));
    manifest["frames"].push_back(name.string());
  }
  open_out(dir / "manifest.json") << manifest.dump(2) << "\n";
  log << "wrote " << cfg.frames << " frames to " << dir.string() << "\n";
}

TrainResult cmd_train(const RunConfig& cfg, const fs::path& data_dir, std::ostream& log) {
  std::vector<PointCloud> frames;
  if (!data_dir.empty()) {
    frames = load_manifest_frames(data_dir);
  } else {
    const SceneSpec scene = scene_for(cfg);
    for (int f = 0; f < std::max(cfg.frames, 1); ++f) frames.push_back(scene_frame(scene, cfg, f));
  }
  const fs::path dir = cfg.output_dir;
  ensure_dir(dir);
  save_run_config(dir / "config.json", cfg);

  TrainOptions opt;
  opt.grid = cfg.grid;
  opt.layout = build_layout(cfg.grid, cfg.patch_size, cfg.key_scale);
  opt.steps_per_epoch = static_cast<std::size_t>(cfg.steps_per_epoch);
  std::ofstream curve = open_out(dir / "loss.csv");
  curve << "step,loss\n" << std::setprecision(17);
  opt.on_step = [&curve](const StepLoss& s) { curve << s.step << ',' << s.loss << '\n'; };

  TrainResult r = train(ModelParams::init(cfg.network, cfg.seed),
                        frame_sample_source(std::move(frames), cfg), cfg.loss, opt);
  save_checkpoint(dir / "checkpoint.cmck", r.params, {cfg.seed, r.steps});
  log << "trained " << r.steps << " steps";
  if (!r.curve.empty()) log << ", final loss " << r.curve.back().loss;
  log << "\n";
  return r;
}

void cmd_infer(const RunConfig& cfg, const InferRequest& req, std::ostream& log) {
  require_file(req.checkpoint, "checkpoint");
  require_file(req.frame_t, "frame");
  require_file(req.frame_t1, "frame");
  const ModelParams params = load_checkpoint(req.checkpoint);
  if (!(params.dims == cfg.network)) {
    throw DataError("checkpoint dimensions do not match the configuration");
  }
  const PointCloud pc_t = load_point_cloud(req.frame_t);
  const PointCloud pc_t1 = load_point_cloud(req.frame_t1);
  RigidTransform ego = RigidTransform::identity();
  if (!req.scene.empty()) ego = ego_transform(load_scene_spec(req.scene), cfg.frame_dt);

  const InferenceOutput out = infer_flow(params, cfg, pc_t, pc_t1, ego);
  const fs::path dir = cfg.output_dir;
  ensure_dir(dir);
  if (!req.maps_only) {
    save_flow(dir / "flow.pcv", pc_t, out.point_flow);
    save_pillar_table(dir / "pillars.csv", pillar_table(out.flow, out.pill_t.non_empty_cells()));
    log << "matched " << out.assoc.matches.size() << " pillars\n";
  }
  for (const auto& [row, col] : req.probmap_cells) {
    if (row < 0 || col < 0 || row >= cfg.grid.rows() || col >= cfg.grid.cols()) {
      throw UsageError("probability-map cell outside the grid");
    }
    const int cell = row * cfg.grid.cols() + col;
    const std::string stem = "probmap_" + std::to_string(row) + "_" + std::to_string(col);
    std::ostringstream text, pgm;
    if (!write_probability_map(text, out.assoc, out.layout, cell) ||
        !write_probability_pgm(pgm, out.assoc, out.layout, cell)) {
      throw DataError("pillar " + std::to_string(row) + "," + std::to_string(col) +
                      " is empty in frame t");
    }
    open_out(dir / (stem + ".txt")) << text.str();
    open_out(dir / (stem + ".pgm")) << pgm.str();
    log << "wrote " << (dir / (stem + ".txt")).string() << "\n";
  }
}

void cmd_eval(const RunConfig& cfg, const fs::path& pred, const fs::path& gt, EvalMode mode,
              std::ostream& out) {
  require_file(pred, "prediction");
  require_file(gt, "ground truth");
  // Inputs are validated before anything is written.
  auto emit = [&](const auto& m) {
    ensure_dir(cfg.output_dir);
    std::ofstream csv = open_out(fs::path(cfg.output_dir) / "metrics.csv");
    write_report(out, m);
    write_csv(csv, m);
  };
  if (mode == EvalMode::kSceneFlow) {
    const std::vector<Vec3> p = load_flow(pred), g = load_flow(gt);
    if (p.size() != g.size() || p.empty()) throw DataError("prediction and ground truth lengths differ");
    emit(scene_flow_metrics(p, g));
    return;
  }
  const std::vector<PillarMotion> p = load_pillar_table(pred), g = load_pillar_table(gt);
  if (p.size() != g.size()) throw DataError("prediction and ground truth lengths differ");
  std::vector<Vec2> pv, gv;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i].row != g[i].row || p[i].col != g[i].col) {
      throw DataError("prediction and ground truth list different pillars");
    }
    pv.push_back(p[i].displacement);
    gv.push_back(g[i].displacement);
  }
  SpeedThresholds thresholds;
  thresholds.static_speed = cfg.static_speed;
  emit(motion_prediction_metrics(pv, gv, speed_groups(gv, cfg.horizon, thresholds)));
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app("Self-supervised pillar scene-motion estimation", "contrastmotion");
  app.require_subcommand(1);
  Overrides o;

  auto* generate = app.add_subcommand("generate", "Write synthetic frame sequences");
  add_common(generate, o);
  generate->add_option("--frames", o.frames, "Number of frames");

  auto* train_cmd = app.add_subcommand("train", "Train a model and write a checkpoint");
  add_common(train_cmd, o);
  std::string data_dir;
  train_cmd->add_option("--data", data_dir, "Directory written by 'generate'");
  train_cmd->add_option("--epochs", o.epochs, "Training epochs");
  train_cmd->add_option("--steps-per-epoch", o.steps_per_epoch, "Optimizer steps per epoch");
  train_cmd->add_option("--lr", o.learning_rate, "Learning rate");
  train_cmd->add_option("--frames", o.frames, "Frames to synthesize when --data is absent");

  InferRequest req;
  std::vector<std::string> cells;
  auto add_infer = [&](CLI::App* sub) {
    add_common(sub, o);
    sub->add_option("--checkpoint", req.checkpoint, "Checkpoint file")->required();
    sub->add_option("--frame-t", req.frame_t, "Frame at time t (PCV)")->required();
    sub->add_option("--frame-t1", req.frame_t1, "Frame at time t+1 (PCV)")->required();
    sub->add_option("--scene", req.scene, "scene.json supplying the ego transform");
  };
  auto* infer = app.add_subcommand("infer", "Estimate flow between two frames");
  add_infer(infer);
  infer->add_option("--probmap", cells, "Reference pillar ROW,COL for a probability map");
  auto* probmap = app.add_subcommand("probmap", "Write probability maps only");
  add_infer(probmap);
  probmap->add_option("--cell", cells, "Reference pillar ROW,COL")->required();

  auto* eval = app.add_subcommand("eval", "Score predictions against ground truth");
  add_common(eval, o);
  fs::path pred, gt;
  std::string mode = "sceneflow";
  eval->add_option("--pred", pred, "Predicted flow (PCV) or pillar table (CSV)")->required();
  eval->add_option("--gt", gt, "Ground truth in the same format")->required();
  eval->add_option("--mode", mode, "sceneflow or motion")
      ->check(CLI::IsMember({"sceneflow", "motion"}));

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kExitUsage;
  }

  CLI::App* active = app.get_subcommands().front();
  try {
    const RunConfig cfg = resolve_config(o);
    if (active == generate) {
      cmd_generate(cfg, out);
    } else if (active == train_cmd) {
      cmd_train(cfg, data_dir, out);
    } else if (active == infer || active == probmap) {
      for (const std::string& c : cells) req.probmap_cells.push_back(parse_cell(c));
      req.maps_only = active == probmap;
      cmd_infer(cfg, req, out);
    } else {
      cmd_eval(cfg, pred, gt, mode == "motion" ? EvalMode::kMotion : EvalMode::kSceneFlow, out);
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n" << active->help();
    return kExitUsage;
  } catch (const NumericFailure& e) {
    err << "error: " << e.what() << "\n" << e.diagnostics();
    return kExitNumeric;
  } catch (const DataError& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const nlohmann::json::exception& e) {
    err << "error: malformed JSON: " << e.what() << "\n";
    return kExitData;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitOk;
}

}  // namespace cmotion::cli
