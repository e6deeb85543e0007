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

#ifndef CMOTION_TRAINER_H_
#define CMOTION_TRAINER_H_

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cmotion/grid.h"
#include "cmotion/labels.h"
#include "cmotion/loss.h"
#include "cmotion/network.h"
#include "cmotion/patch_layout.h"

namespace cmotion {

// Raised when the loss or parameters stop being finite. `diagnostics` is a
// human-readable dump of the optimizer state at the failing step.
class NumericFailure : public std::runtime_error {
 public:
  NumericFailure(const std::string& what, std::string diagnostics)
      : std::runtime_error(what), diagnostics_(std::move(diagnostics)) {}
  const std::string& diagnostics() const { return diagnostics_; }

 private:
  std::string diagnostics_;
};

// A frame pair with the transform relating them (frame t to frame t+1).
struct TrainingSample {
  PointCloud pc_t;
  PointCloud pc_t1;
  RigidTransform transform;
};

// Everything the loss needs that does not depend on the parameters.
struct PreparedPair {
  Pillarization pill_t;
  Pillarization pill_t1;
  PointFeatures features_t;
  PointFeatures features_t1;
  CorrespondenceLabels labels;
  std::vector<std::uint8_t> key_mask;
};

double effective_epsilon(const LossConfig& cfg, const GridSpec& grid);

PreparedPair prepare_pair(const TrainingSample& sample, const GridSpec& grid, const LossConfig& cfg);

struct LossAndGradients {
  LossValue loss;
  PairGradients grads;
};

LossAndGradients loss_and_gradients(const ModelParams& params, const PreparedPair& pair,
                                    const PatchLayout& layout, const LossConfig& cfg);

// Adam with decoupled weight decay: θ -= lr * (m̂ / (sqrt(v̂) + eps) + wd * θ).
class AdamW {
 public:
  AdamW(const ModelParams& like, double lr, double weight_decay, double beta1 = 0.9,
        double beta2 = 0.999, double eps = 1e-8);
  void step(ModelParams& params, const ModelParams& grads);
  std::int64_t steps() const { return t_; }

 private:
  ModelParams m_, v_;
  double lr_, wd_, b1_, b2_, eps_;
  std::int64_t t_ = 0;
};

struct StepLoss {
  std::size_t step;
  double loss;
};

struct TrainResult {
  ModelParams params;
  std::vector<StepLoss> curve;
  std::vector<double> epoch_means;
  std::size_t steps = 0;
};

// Produces the sample for a global step index.
using SampleSource = std::function<TrainingSample(std::size_t step)>;

struct TrainOptions {
  GridSpec grid;
  PatchLayout layout;
  std::size_t steps_per_epoch = 1;
  std::function<void(const StepLoss&)> on_step;
};

// Runs cfg.epochs * steps_per_epoch optimizer steps, each averaging the
// gradients of cfg.batch_size samples. Throws NumericFailure on a non-finite loss.
TrainResult train(ModelParams params, const SampleSource& source, const LossConfig& cfg,
                  const TrainOptions& options);

}  // namespace cmotion

#endif  // CMOTION_TRAINER_H_
