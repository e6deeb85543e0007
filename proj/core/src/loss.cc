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

#include "cmotion/loss.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace cmotion {

std::string to_string(LossKind kind) {
  return kind == LossKind::kSoftDiscriminative ? "sd" : "pointinfonce";
}

LossKind loss_kind_from_string(const std::string& s) {
  if (s == "sd") return LossKind::kSoftDiscriminative;
  if (s == "pointinfonce") return LossKind::kPointInfoNce;
  throw std::invalid_argument("unknown loss kind: " + s);
}

namespace {

double dot(const double* a, const double* b, int d) {
  double s = 0.0;
  for (int i = 0; i < d; ++i) s += a[i] * b[i];
  return s;
}

LossValue evaluate(const FeatureMap& z_t, const FeatureMap& z_t1, const CorrespondenceLabels& labels,
                   const PatchLayout& layout, const std::vector<std::uint8_t>& key_mask,
                   bool hard_only, bool with_gradient) {
  require_same_shape(z_t, z_t1, "contrastive loss");
  if (layout.rows != z_t.rows || layout.cols != z_t.cols) {
    throw std::invalid_argument("contrastive loss: layout does not match feature map");
  }
  if (key_mask.size() != static_cast<std::size_t>(z_t1.cells())) {
    throw std::invalid_argument("contrastive loss: key mask size mismatch");
  }
  const int d = z_t.channels;
  LossValue out;
  if (with_gradient) {
    out.grad_t = FeatureMap(z_t.rows, z_t.cols, d);
    out.grad_t1 = FeatureMap(z_t1.rows, z_t1.cols, d);
  }

  std::vector<std::vector<int>> keys_of_patch(layout.num_patches());
  std::vector<bool> keys_ready(layout.num_patches(), false);
  std::vector<double> logits, dlogits, wts;
  double total = 0.0;

  for (const QueryLabel& q : labels.queries) {
    const int patch = layout.patch_of(q.source);
    if (!keys_ready[patch]) {
      for (int c : layout.key_cells(patch)) {
        if (key_mask[c]) keys_of_patch[patch].push_back(c);
      }
      keys_ready[patch] = true;
    }
    const std::vector<int>& keys = keys_of_patch[patch];
    if (keys.empty()) {
      ++out.empty_key_sets;
      continue;
    }
    // Per-key positive weight, zero for negatives.
    wts.assign(keys.size(), 0.0);
    double w_total = 0.0;
    for (const PositiveKey& pk : q.positives) {
      if (hard_only && pk.cell != q.hard) continue;
      const auto it = std::lower_bound(keys.begin(), keys.end(), pk.cell);
      if (it == keys.end() || *it != pk.cell) continue;
      const double w = hard_only ? 1.0 : pk.weight;
      wts[it - keys.begin()] += w;
      w_total += w;
    }
    if (w_total == 0.0) {
      ++out.unsupervised;
      continue;
    }
    const double* zi = z_t.data.data() + static_cast<std::size_t>(q.source) * d;
    logits.resize(keys.size());
    double mx = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < keys.size(); ++k) {
      logits[k] = dot(zi, z_t1.data.data() + static_cast<std::size_t>(keys[k]) * d, d);
      mx = std::max(mx, logits[k]);
    }
    double sum = 0.0;
    for (double l : logits) sum += std::exp(l - mx);
    const double lse = mx + std::log(sum);
    double term = 0.0;
    for (std::size_t k = 0; k < keys.size(); ++k) {
      if (wts[k] != 0.0) term -= wts[k] * (logits[k] - lse);
    }
    total += term;
    ++out.queries;

    if (with_gradient) {
      // dL/dl_k = W p_k - w_k
      dlogits.resize(keys.size());
      for (std::size_t k = 0; k < keys.size(); ++k) {
        dlogits[k] = w_total * std::exp(logits[k] - lse) - wts[k];
      }
      double* gi = out.grad_t.data.data() + static_cast<std::size_t>(q.source) * d;
      for (std::size_t k = 0; k < keys.size(); ++k) {
        const double* zk = z_t1.data.data() + static_cast<std::size_t>(keys[k]) * d;
        double* gk = out.grad_t1.data.data() + static_cast<std::size_t>(keys[k]) * d;
        for (int c = 0; c < d; ++c) {
          gi[c] += dlogits[k] * zk[c];
          gk[c] += dlogits[k] * zi[c];
        }
      }
    }
  }

  if (out.queries > 0) {
    const double scale = 1.0 / static_cast<double>(out.queries);
    out.value = total * scale;
    if (with_gradient) {
      for (double& g : out.grad_t.data) g *= scale;
      for (double& g : out.grad_t1.data) g *= scale;
    }
  }
  return out;
}

}  // namespace

LossValue sd_loss(const FeatureMap& z_t, const FeatureMap& z_t1, const CorrespondenceLabels& labels,
                  const PatchLayout& layout, const std::vector<std::uint8_t>& key_mask,
                  bool with_gradient) {
  return evaluate(z_t, z_t1, labels, layout, key_mask, false, with_gradient);
}

LossValue pointinfonce_loss(const FeatureMap& z_t, const FeatureMap& z_t1,
                            const CorrespondenceLabels& labels, const PatchLayout& layout,
                            const std::vector<std::uint8_t>& key_mask, bool with_gradient) {
  return evaluate(z_t, z_t1, labels, layout, key_mask, true, with_gradient);
}

LossValue contrastive_loss(LossKind kind, const FeatureMap& z_t, const FeatureMap& z_t1,
                           const CorrespondenceLabels& labels, const PatchLayout& layout,
                           const std::vector<std::uint8_t>& key_mask, bool with_gradient) {
  return evaluate(z_t, z_t1, labels, layout, key_mask, kind == LossKind::kPointInfoNce,
                  with_gradient);
}

}  // namespace cmotion
