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

#ifndef CMOTION_NETWORK_H_
#define CMOTION_NETWORK_H_

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cmotion/feature_map.h"
#include "cmotion/grid.h"
#include "cmotion/layers.h"

namespace cmotion {

struct NetworkDims {
  int pfe_hidden = 32;
  int pfe_out = 32;
  int encoder_hidden = 64;
  int feature_dim = 32;
  int gate_hidden = 32;
  bool gated = true;  // false drops the gate network entirely (no-GMF ablation)

  bool operator==(const NetworkDims&) const = default;
};

// All trainable weights. Gradients reuse the same layout.
struct ModelParams {
  NetworkDims dims;
  Dense pfe1, pfe2;
  Conv3x3 enc1, enc2, enc3;
  Conv3x3 gate1, gate2;
  Dense gate_out;

  // Weights uniform in ±1/sqrt(fan_in), biases zero.
  static ModelParams init(const NetworkDims& dims, std::uint64_t seed);
  static ModelParams zeros(const NetworkDims& dims);

  // Visits every parameter block in a fixed order with a stable name.
  void for_each_block(const std::function<void(const std::string&, std::vector<double>&)>& fn);
  void for_each_block(
      const std::function<void(const std::string&, const std::vector<double>&)>& fn) const;
  std::size_t num_parameters() const;
  bool all_finite() const;
};

// --- Stateless forward operations ------------------------------------------

// Shared per-point two-layer perceptron then per-pillar channel max; empty
// pillars stay zero.
FeatureMap pfe_forward(const ModelParams& params, const Pillarization& pill,
                       const PointFeatures& features);

// Three rectified 3x3 convolutions: pfe_out -> hidden -> hidden -> feature_dim.
FeatureMap encoder_forward(const ModelParams& params, const FeatureMap& pfe);

// For every output cell, the input cell whose center lands on it under `ego`
// (frame t+1 to frame t), or -1 when that source lies outside the grid.
std::vector<int> alignment_sources(const RigidTransform& ego, const GridSpec& grid);
FeatureMap align_to_frame(const FeatureMap& f, const RigidTransform& ego, const GridSpec& grid);
FeatureMap gather_cells(const FeatureMap& f, const std::vector<int>& sources);
std::vector<std::uint8_t> gather_mask(const std::vector<std::uint8_t>& mask,
                                      const std::vector<int>& sources);

// Gate network: sigmoid(linear(relu(conv(relu(conv(F)))))) per cell.
GateMap gate_forward(const ModelParams& params, const FeatureMap& f);

struct GmfOutput {
  FeatureMap z_t;
  FeatureMap z_t1;
  GateMap m_t;
  GateMap m_t1;
};

// z_t = F_t + m_t1 ⊙ F_t1, z_t1 = F_t1 + m_t ⊙ F_t with per-cell scalar gates.
// Without a gate network the inputs pass through unchanged.
GmfOutput gmf(const ModelParams& params, const FeatureMap& f_t, const FeatureMap& f_t1_aligned);
// Fusion with externally supplied gates.
GmfOutput fuse(const FeatureMap& f_t, const FeatureMap& f_t1, const GateMap& m_t,
               const GateMap& m_t1);

FeatureMap relu_embed(const FeatureMap& z);

// --- Recording pass for training -------------------------------------------

struct FrameInput {
  const Pillarization* pill = nullptr;
  const PointFeatures* features = nullptr;
};

struct PairEmbedding {
  FeatureMap f_t;   // encoder output, frame t
  FeatureMap f_t1;  // encoder output, frame t+1 after alignment
  GateMap m_t;
  GateMap m_t1;
  FeatureMap z_t;   // rectified embeddings
  FeatureMap z_t1;
};

struct PairGradients {
  ModelParams params;
  std::vector<PointFeature> points_t;   // dL/d(point feature rows), CSR order
  std::vector<PointFeature> points_t1;
  FeatureMap f_t;   // dL/d(encoder output)
  FeatureMap f_t1;  // dL/d(aligned encoder output)
};

// Runs the shared-weight siamese forward pass over a frame pair and keeps every
// intermediate needed to backpropagate. Parameters are referenced, not copied:
// they must outlive the network and stay unchanged between forward and backward.
class PairNetwork {
 public:
  explicit PairNetwork(const ModelParams& params);
  ~PairNetwork();
  PairNetwork(PairNetwork&&) noexcept;
  PairNetwork& operator=(PairNetwork&&) noexcept;

  // `align` optionally re-indexes the frame t+1 encoder output (see alignment_sources).
  const PairEmbedding& forward(const FrameInput& t, const FrameInput& t1,
                               const std::vector<int>* align = nullptr);

  // Throws std::logic_error when no forward pass has been recorded.
  // With detach_gates the gate values are treated as constants.
  PairGradients backward(const FeatureMap& grad_z_t, const FeatureMap& grad_z_t1,
                         bool detach_gates = false) const;

  bool has_record() const;

  // Branch taken by every piecewise-linear unit in the recorded pass: one
  // entry per rectifier (1 when active) and per max-pool slot (winning point).
  // The recorded outputs are smooth in the parameters and inputs across any
  // region where this pattern stays constant.
  std::vector<int> branch_pattern() const;

 private:
  struct Record;
  const ModelParams* params_;
  std::unique_ptr<Record> record_;
};

}  // namespace cmotion

#endif  // CMOTION_NETWORK_H_
