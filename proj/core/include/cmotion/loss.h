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

#ifndef CMOTION_LOSS_H_
#define CMOTION_LOSS_H_

#include <cstdint>
#include <string>
#include <vector>

#include "cmotion/feature_map.h"
#include "cmotion/labels.h"
#include "cmotion/patch_layout.h"

namespace cmotion {

enum class LossKind { kSoftDiscriminative, kPointInfoNce };

std::string to_string(LossKind kind);
LossKind loss_kind_from_string(const std::string& s);

struct LossConfig {
  LossKind kind = LossKind::kSoftDiscriminative;
  double epsilon = 0.0;  // positive radius in meters; <= 0 means 1.1 pillar sides
  double w_self = 0.6;
  double w_neighbor = 0.1;
  double learning_rate = 0.001;
  double weight_decay = 0.001;
  int epochs = 1;
  int batch_size = 1;
  std::uint64_t seed = 0;
};

struct LossValue {
  double value = 0.0;
  std::size_t queries = 0;           // queries that contributed a term
  std::size_t empty_key_sets = 0;    // labeled queries whose key patch had no non-empty pillar
  std::size_t unsupervised = 0;      // labeled queries with no positive inside their key patch
  FeatureMap grad_t;                 // filled when gradients are requested
  FeatureMap grad_t1;
};

// Mean over contributing queries of
//   -Σ_{j∈V(i)} w_ij log( exp(z_i·z_j) / Σ_{k∈K(i)} exp(z_i·z_k) )
// where K(i) is the set of non-empty (key_mask) pillars in query i's key patch
// and positives outside K(i) are dropped.
LossValue sd_loss(const FeatureMap& z_t, const FeatureMap& z_t1, const CorrespondenceLabels& labels,
                  const PatchLayout& layout, const std::vector<std::uint8_t>& key_mask,
                  bool with_gradient = false);

// Same objective with the hard target as the only positive, weight 1.
LossValue pointinfonce_loss(const FeatureMap& z_t, const FeatureMap& z_t1,
                            const CorrespondenceLabels& labels, const PatchLayout& layout,
                            const std::vector<std::uint8_t>& key_mask,
                            bool with_gradient = false);

LossValue contrastive_loss(LossKind kind, const FeatureMap& z_t, const FeatureMap& z_t1,
                           const CorrespondenceLabels& labels, const PatchLayout& layout,
                           const std::vector<std::uint8_t>& key_mask, bool with_gradient = false);

}  // namespace cmotion

#endif  // CMOTION_LOSS_H_
