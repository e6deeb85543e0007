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

#ifndef CMOTION_TOOLS_CLI_H_
#define CMOTION_TOOLS_CLI_H_

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "cmotion/run_config.h"
#include "cmotion/trainer.h"

namespace cmotion::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitData = 3;
inline constexpr int kExitNumeric = 4;

// Bad or contradictory invocation; maps to kExitUsage.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Parses argv, runs one subcommand and returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Writes cfg.frames frames of the configured scene plus scene.json and
// manifest.json into cfg.output_dir.
void cmd_generate(const RunConfig& cfg, std::ostream& log);

// Trains on the frames listed in `data_dir`/manifest.json, or on frames
// synthesized from cfg when data_dir is empty. Writes checkpoint.cmck,
// loss.csv and config.json into cfg.output_dir.
TrainResult cmd_train(const RunConfig& cfg, const std::filesystem::path& data_dir,
                      std::ostream& log);

struct InferRequest {
  std::filesystem::path checkpoint;
  std::filesystem::path frame_t;
  std::filesystem::path frame_t1;
  std::filesystem::path scene;  // optional; supplies the ego transform
  std::vector<std::pair<int, int>> probmap_cells;
  bool maps_only = false;  // skip the flow outputs
};

// Writes flow.pcv, pillars.csv and one probmap_<row>_<col>.txt/.pgm per
// requested cell into cfg.output_dir.
void cmd_infer(const RunConfig& cfg, const InferRequest& req, std::ostream& log);

enum class EvalMode { kSceneFlow, kMotion };

// Scene-flow mode compares fx fy fz columns of two PCV files. Motion mode
// compares two pillar tables of future displacements over `cfg.horizon`.
// Prints the report and writes metrics.csv into cfg.output_dir.
void cmd_eval(const RunConfig& cfg, const std::filesystem::path& pred,
              const std::filesystem::path& gt, EvalMode mode, std::ostream& out);

}  // namespace cmotion::cli

#endif  // CMOTION_TOOLS_CLI_H_
