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

#include "cmotion/trainer.h"

#include <cmath>
#include <sstream>

namespace cmotion {

double effective_epsilon(const LossConfig& cfg, const GridSpec& grid) {
  return cfg.epsilon > 0.0 ? cfg.epsilon : default_epsilon(grid);
}

PreparedPair prepare_pair(const TrainingSample& sample, const GridSpec& grid,
                          const LossConfig& cfg) {
  PreparedPair p;
  p.pill_t = pillarize(sample.pc_t, grid);
  p.pill_t1 = pillarize(sample.pc_t1, grid);
  p.features_t = pfe_point_features(sample.pc_t, p.pill_t);
  p.features_t1 = pfe_point_features(sample.pc_t1, p.pill_t1);
  p.labels = correspondence_labels(grid, p.pill_t, p.pill_t1, sample.transform,
                                   effective_epsilon(cfg, grid), {cfg.w_self, cfg.w_neighbor});
  p.key_mask = p.pill_t1.mask();
  return p;
}

LossAndGradients loss_and_gradients(const ModelParams& params, const PreparedPair& pair,
                                    const PatchLayout& layout, const LossConfig& cfg) {
  PairNetwork net(params);
  const PairEmbedding& emb = net.forward({&pair.pill_t, &pair.features_t},
                                         {&pair.pill_t1, &pair.features_t1});
  LossAndGradients out;
  out.loss = contrastive_loss(cfg.kind, emb.z_t, emb.z_t1, pair.labels, layout, pair.key_mask, true);
  out.grads = net.backward(out.loss.grad_t, out.loss.grad_t1);
  return out;
}

AdamW::AdamW(const ModelParams& like, double lr, double weight_decay, double beta1, double beta2,
             double eps)
    : m_(ModelParams::zeros(like.dims)),
      v_(ModelParams::zeros(like.dims)),
      lr_(lr),
      wd_(weight_decay),
      b1_(beta1),
      b2_(beta2),
      eps_(eps) {}

void AdamW::step(ModelParams& params, const ModelParams& grads) {
  ++t_;
  const double c1 = 1.0 - std::pow(b1_, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(b2_, static_cast<double>(t_));
  std::vector<std::vector<double>*> p_blocks, m_blocks, v_blocks;
  std::vector<const std::vector<double>*> g_blocks;
  params.for_each_block([&](const std::string&, std::vector<double>& b) { p_blocks.push_back(&b); });
  m_.for_each_block([&](const std::string&, std::vector<double>& b) { m_blocks.push_back(&b); });
  v_.for_each_block([&](const std::string&, std::vector<double>& b) { v_blocks.push_back(&b); });
  grads.for_each_block(
      [&](const std::string&, const std::vector<double>& b) { g_blocks.push_back(&b); });
  for (std::size_t b = 0; b < p_blocks.size(); ++b) {
    std::vector<double>& p = *p_blocks[b];
    std::vector<double>& m = *m_blocks[b];
    std::vector<double>& v = *v_blocks[b];
    const std::vector<double>& g = *g_blocks[b];
    for (std::size_t i = 0; i < p.size(); ++i) {
      m[i] = b1_ * m[i] + (1.0 - b1_) * g[i];
      v[i] = b2_ * v[i] + (1.0 - b2_) * g[i] * g[i];
      const double update = (m[i] / c1) / (std::sqrt(v[i] / c2) + eps_) + wd_ * p[i];
      p[i] -= lr_ * update;
    }
  }
}

namespace {

void accumulate(ModelParams& into, const ModelParams& g, double scale) {
  std::vector<const std::vector<double>*> src;
  g.for_each_block([&](const std::string&, const std::vector<double>& b) { src.push_back(&b); });
  std::size_t i = 0;
  into.for_each_block([&](const std::string&, std::vector<double>& b) {
    const std::vector<double>& s = *src[i++];
    for (std::size_t k = 0; k < b.size(); ++k) b[k] += scale * s[k];
  });
}

std::string dump_state(std::size_t step, double loss, const ModelParams& params,
                       const ModelParams* grads) {
  std::ostringstream os;
  os << "step " << step << " loss " << loss << "\n";
  auto norms = [&os](const char* tag, const ModelParams& m) {
    m.for_each_block([&](const std::string& name, const std::vector<double>& b) {
      double s = 0.0;
      bool finite = true;
      for (double v : b) {
        s += v * v;
        finite = finite && std::isfinite(v);
      }
      os << tag << ' ' << name << " l2=" << std::sqrt(s) << (finite ? "" : " NONFINITE") << "\n";
    });
  };
  norms("param", params);
  if (grads) norms("grad", *grads);
  return os.str();
}

}  // namespace

TrainResult train(ModelParams params, const SampleSource& source, const LossConfig& cfg,
                  const TrainOptions& options) {
  if (cfg.batch_size < 1) throw std::invalid_argument("batch size must be >= 1");
  if (cfg.epochs < 0) throw std::invalid_argument("epochs must be >= 0");
  TrainResult result;
  AdamW opt(params, cfg.learning_rate, cfg.weight_decay);
  std::size_t sample_index = 0;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    double epoch_sum = 0.0;
    for (std::size_t s = 0; s < options.steps_per_epoch; ++s) {
      ModelParams grads = ModelParams::zeros(params.dims);
      double step_loss = 0.0;
      for (int b = 0; b < cfg.batch_size; ++b) {
        const PreparedPair pair = prepare_pair(source(sample_index++), options.grid, cfg);
        LossAndGradients lg = loss_and_gradients(params, pair, options.layout, cfg);
        if (!std::isfinite(lg.loss.value)) {
          throw NumericFailure("non-finite loss at step " + std::to_string(result.steps),
                               dump_state(result.steps, lg.loss.value, params, &lg.grads.params));
        }
        step_loss += lg.loss.value / cfg.batch_size;
        accumulate(grads, lg.grads.params, 1.0 / cfg.batch_size);
      }
      opt.step(params, grads);
      if (!params.all_finite()) {
        throw NumericFailure("parameters became non-finite at step " + std::to_string(result.steps),
                             dump_state(result.steps, step_loss, params, &grads));
      }
      const StepLoss entry{result.steps, step_loss};
      result.curve.push_back(entry);
      if (options.on_step) options.on_step(entry);
      epoch_sum += step_loss;
      ++result.steps;
    }
    result.epoch_means.push_back(options.steps_per_epoch ? epoch_sum / options.steps_per_epoch : 0.0);
  }
  result.params = std::move(params);
  return result;
}

}  // namespace cmotion
