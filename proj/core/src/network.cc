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

#include "cmotion/network.h"

#include <cmath>
#include <random>
#include <stdexcept>

namespace cmotion {

namespace {

void fill_uniform(std::vector<double>& w, int fan_in, std::mt19937_64& rng) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
  std::uniform_real_distribution<double> dist(-bound, bound);
  for (double& x : w) x = dist(rng);
}

FeatureMap relu_of(const FeatureMap& pre) {
  FeatureMap out = pre;
  relu_inplace(out.data);
  return out;
}

FeatureMap masked_grad(const FeatureMap& pre, FeatureMap grad) {
  relu_backward_inplace(pre.data, grad.data);
  return grad;
}

// --- PFE ---------------------------------------------------------------------

struct PfeRecord {
  int n = 0;
  std::vector<double> x, h1pre, h1, h2pre, h2;
  std::vector<int> argmax;  // cells x pfe_out, CSR slot of the max point, -1 if empty
  FeatureMap out;
};

PfeRecord pfe_run(const ModelParams& p, const Pillarization& pill, const PointFeatures& feats) {
  if (feats.rows.size() != pill.num_in_range()) {
    throw std::invalid_argument("point features do not match pillarization");
  }
  PfeRecord r;
  r.n = static_cast<int>(feats.rows.size());
  r.x.resize(static_cast<std::size_t>(r.n) * kPointFeatureDim);
  for (int k = 0; k < r.n; ++k) {
    std::copy(feats.rows[k].begin(), feats.rows[k].end(), r.x.begin() + k * kPointFeatureDim);
  }
  r.h1pre = dense_forward(p.pfe1, r.x, r.n);
  r.h1 = r.h1pre;
  relu_inplace(r.h1);
  r.h2pre = dense_forward(p.pfe2, r.h1, r.n);
  r.h2 = r.h2pre;
  relu_inplace(r.h2);

  const int d = p.pfe2.out;
  r.out = FeatureMap(pill.rows(), pill.cols(), d);
  r.argmax.assign(static_cast<std::size_t>(pill.cells()) * d, -1);
  const auto& off = pill.offsets();
  for (int cell = 0; cell < pill.cells(); ++cell) {
    if (off[cell] == off[cell + 1]) continue;
    double* o = r.out.data.data() + static_cast<std::size_t>(cell) * d;
    int* a = r.argmax.data() + static_cast<std::size_t>(cell) * d;
    for (int ch = 0; ch < d; ++ch) {
      int best = off[cell];
      for (int k = off[cell] + 1; k < off[cell + 1]; ++k) {
        if (r.h2[static_cast<std::size_t>(k) * d + ch] > r.h2[static_cast<std::size_t>(best) * d + ch]) best = k;
      }
      a[ch] = best;
      o[ch] = r.h2[static_cast<std::size_t>(best) * d + ch];
    }
  }
  return r;
}

std::vector<PointFeature> pfe_back(const ModelParams& p, const PfeRecord& r, const FeatureMap& grad,
                                   ModelParams& g) {
  const int d = p.pfe2.out;
  std::vector<double> dh2(r.h2.size(), 0.0);
  for (std::size_t i = 0; i < r.argmax.size(); ++i) {
    if (r.argmax[i] < 0) continue;
    dh2[static_cast<std::size_t>(r.argmax[i]) * d + i % d] += grad.data[i];
  }
  relu_backward_inplace(r.h2pre, dh2);
  std::vector<double> dh1 = dense_backward(p.pfe2, r.h1, r.n, dh2, g.pfe2);
  relu_backward_inplace(r.h1pre, dh1);
  std::vector<double> dx = dense_backward(p.pfe1, r.x, r.n, dh1, g.pfe1);
  std::vector<PointFeature> out(r.n);
  for (int k = 0; k < r.n; ++k) {
    std::copy(dx.begin() + k * kPointFeatureDim, dx.begin() + (k + 1) * kPointFeatureDim,
              out[k].begin());
  }
  return out;
}

// --- Encoder -----------------------------------------------------------------

struct EncoderRecord {
  FeatureMap in, a1pre, a1, a2pre, a2, a3pre, out;
};

EncoderRecord encoder_run(const ModelParams& p, FeatureMap in) {
  EncoderRecord r;
  r.in = std::move(in);
  r.a1pre = conv3x3_forward(p.enc1, r.in);
  r.a1 = relu_of(r.a1pre);
  r.a2pre = conv3x3_forward(p.enc2, r.a1);
  r.a2 = relu_of(r.a2pre);
  r.a3pre = conv3x3_forward(p.enc3, r.a2);
  r.out = relu_of(r.a3pre);
  return r;
}

FeatureMap encoder_back(const ModelParams& p, const EncoderRecord& r, const FeatureMap& grad,
                        ModelParams& g) {
  FeatureMap d = masked_grad(r.a3pre, grad);
  d = masked_grad(r.a2pre, conv3x3_backward(p.enc3, r.a2, d, g.enc3));
  d = masked_grad(r.a1pre, conv3x3_backward(p.enc2, r.a1, d, g.enc2));
  return conv3x3_backward(p.enc1, r.in, d, g.enc1);
}

// --- Gate network ------------------------------------------------------------

struct GateRecord {
  FeatureMap g1pre, g1, g2pre, g2;
  GateMap m;
};

GateRecord gate_run(const ModelParams& p, const FeatureMap& f) {
  GateRecord r;
  r.g1pre = conv3x3_forward(p.gate1, f);
  r.g1 = relu_of(r.g1pre);
  r.g2pre = conv3x3_forward(p.gate2, r.g1);
  r.g2 = relu_of(r.g2pre);
  const std::vector<double> logit = dense_forward(p.gate_out, r.g2.data, r.g2.cells());
  r.m = GateMap(f.rows, f.cols);
  for (std::size_t k = 0; k < logit.size(); ++k) r.m.data[k] = sigmoid(logit[k]);
  return r;
}

FeatureMap gate_back(const ModelParams& p, const FeatureMap& f, const GateRecord& r,
                     const std::vector<double>& grad_m, ModelParams& g) {
  std::vector<double> dlogit(grad_m.size());
  for (std::size_t k = 0; k < dlogit.size(); ++k) {
    dlogit[k] = grad_m[k] * r.m.data[k] * (1.0 - r.m.data[k]);
  }
  FeatureMap d(r.g2.rows, r.g2.cols, r.g2.channels);
  d.data = dense_backward(p.gate_out, r.g2.data, r.g2.cells(), dlogit, g.gate_out);
  d = masked_grad(r.g2pre, d);
  d = masked_grad(r.g1pre, conv3x3_backward(p.gate2, r.g1, d, g.gate2));
  return conv3x3_backward(p.gate1, f, d, g.gate1);
}

}  // namespace

// --- ModelParams -------------------------------------------------------------

ModelParams ModelParams::zeros(const NetworkDims& dims) {
  if (dims.pfe_hidden <= 0 || dims.pfe_out <= 0 || dims.encoder_hidden <= 0 ||
      dims.feature_dim <= 0 || (dims.gated && dims.gate_hidden <= 0)) {
    throw std::invalid_argument("network dimensions must be positive");
  }
  ModelParams p;
  p.dims = dims;
  p.pfe1 = Dense(kPointFeatureDim, dims.pfe_hidden);
  p.pfe2 = Dense(dims.pfe_hidden, dims.pfe_out);
  p.enc1 = Conv3x3(dims.pfe_out, dims.encoder_hidden);
  p.enc2 = Conv3x3(dims.encoder_hidden, dims.encoder_hidden);
  p.enc3 = Conv3x3(dims.encoder_hidden, dims.feature_dim);
  if (dims.gated) {
    p.gate1 = Conv3x3(dims.feature_dim, dims.gate_hidden);
    p.gate2 = Conv3x3(dims.gate_hidden, dims.gate_hidden);
    p.gate_out = Dense(dims.gate_hidden, 1);
  }
  return p;
}

ModelParams ModelParams::init(const NetworkDims& dims, std::uint64_t seed) {
  ModelParams p = zeros(dims);
  std::mt19937_64 rng(seed);
  fill_uniform(p.pfe1.weight, p.pfe1.in, rng);
  fill_uniform(p.pfe2.weight, p.pfe2.in, rng);
  fill_uniform(p.enc1.weight, 9 * p.enc1.in, rng);
  fill_uniform(p.enc2.weight, 9 * p.enc2.in, rng);
  fill_uniform(p.enc3.weight, 9 * p.enc3.in, rng);
  if (dims.gated) {
    fill_uniform(p.gate1.weight, 9 * p.gate1.in, rng);
    fill_uniform(p.gate2.weight, 9 * p.gate2.in, rng);
    fill_uniform(p.gate_out.weight, p.gate_out.in, rng);
  }
  return p;
}

void ModelParams::for_each_block(
    const std::function<void(const std::string&, std::vector<double>&)>& fn) {
  fn("pfe.0.weight", pfe1.weight);
  fn("pfe.0.bias", pfe1.bias);
  fn("pfe.1.weight", pfe2.weight);
  fn("pfe.1.bias", pfe2.bias);
  fn("encoder.0.weight", enc1.weight);
  fn("encoder.0.bias", enc1.bias);
  fn("encoder.1.weight", enc2.weight);
  fn("encoder.1.bias", enc2.bias);
  fn("encoder.2.weight", enc3.weight);
  fn("encoder.2.bias", enc3.bias);
  if (dims.gated) {
    fn("gate.conv0.weight", gate1.weight);
    fn("gate.conv0.bias", gate1.bias);
    fn("gate.conv1.weight", gate2.weight);
    fn("gate.conv1.bias", gate2.bias);
    fn("gate.linear.weight", gate_out.weight);
    fn("gate.linear.bias", gate_out.bias);
  }
}

void ModelParams::for_each_block(
    const std::function<void(const std::string&, const std::vector<double>&)>& fn) const {
  const_cast<ModelParams*>(this)->for_each_block(
      [&fn](const std::string& name, std::vector<double>& block) { fn(name, block); });
}

std::size_t ModelParams::num_parameters() const {
  std::size_t n = 0;
  for_each_block([&n](const std::string&, const std::vector<double>& b) { n += b.size(); });
  return n;
}

bool ModelParams::all_finite() const {
  bool ok = true;
  for_each_block([&ok](const std::string&, const std::vector<double>& b) {
    for (double v : b) ok = ok && std::isfinite(v);
  });
  return ok;
}

// --- Stateless forward ---------------------------------------------------------

FeatureMap pfe_forward(const ModelParams& params, const Pillarization& pill,
                       const PointFeatures& features) {
  return pfe_run(params, pill, features).out;
}

FeatureMap encoder_forward(const ModelParams& params, const FeatureMap& pfe) {
  FeatureMap a = relu_of(conv3x3_forward(params.enc1, pfe));
  a = relu_of(conv3x3_forward(params.enc2, a));
  return relu_of(conv3x3_forward(params.enc3, a));
}

std::vector<int> alignment_sources(const RigidTransform& ego, const GridSpec& grid) {
  const int rows = grid.rows(), cols = grid.cols();
  std::vector<int> src(static_cast<std::size_t>(rows) * cols);
  if (ego.is_identity()) {
    for (std::size_t k = 0; k < src.size(); ++k) src[k] = static_cast<int>(k);
    return src;
  }
  const RigidTransform back = ego.inverse();
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const Vec2 p = back.apply_xy(grid.center(r, c));
      const auto cell = grid.cell_of(p.x(), p.y());
      src[static_cast<std::size_t>(r) * cols + c] = cell ? *cell : -1;
    }
  }
  return src;
}

FeatureMap gather_cells(const FeatureMap& f, const std::vector<int>& sources) {
  if (sources.size() != static_cast<std::size_t>(f.cells())) {
    throw std::invalid_argument("alignment table does not match feature map");
  }
  FeatureMap out(f.rows, f.cols, f.channels);
  for (int k = 0; k < f.cells(); ++k) {
    if (sources[k] < 0) continue;
    const auto in = f.cell(sources[k]);
    std::copy(in.begin(), in.end(), out.cell(k).begin());
  }
  return out;
}

std::vector<std::uint8_t> gather_mask(const std::vector<std::uint8_t>& mask,
                                      const std::vector<int>& sources) {
  std::vector<std::uint8_t> out(sources.size(), 0);
  for (std::size_t k = 0; k < sources.size(); ++k) {
    if (sources[k] >= 0) out[k] = mask[sources[k]];
  }
  return out;
}

FeatureMap align_to_frame(const FeatureMap& f, const RigidTransform& ego, const GridSpec& grid) {
  if (ego.is_identity()) return f;
  return gather_cells(f, alignment_sources(ego, grid));
}

GateMap gate_forward(const ModelParams& params, const FeatureMap& f) {
  if (!params.dims.gated) throw std::logic_error("model has no gate network");
  return gate_run(params, f).m;
}

GmfOutput fuse(const FeatureMap& f_t, const FeatureMap& f_t1, const GateMap& m_t,
               const GateMap& m_t1) {
  require_same_shape(f_t, f_t1, "gmf");
  GmfOutput out{f_t, f_t1, m_t, m_t1};
  const int d = f_t.channels;
  for (int k = 0; k < f_t.cells(); ++k) {
    const double* a = f_t.data.data() + static_cast<std::size_t>(k) * d;
    const double* b = f_t1.data.data() + static_cast<std::size_t>(k) * d;
    double* zt = out.z_t.data.data() + static_cast<std::size_t>(k) * d;
    double* zt1 = out.z_t1.data.data() + static_cast<std::size_t>(k) * d;
    for (int ch = 0; ch < d; ++ch) {
      zt[ch] = a[ch] + m_t1.data[k] * b[ch];
      zt1[ch] = b[ch] + m_t.data[k] * a[ch];
    }
  }
  return out;
}

GmfOutput gmf(const ModelParams& params, const FeatureMap& f_t, const FeatureMap& f_t1_aligned) {
  require_same_shape(f_t, f_t1_aligned, "gmf");
  if (!params.dims.gated) {
    return {f_t, f_t1_aligned, GateMap(f_t.rows, f_t.cols), GateMap(f_t.rows, f_t.cols)};
  }
  if (f_t.channels != params.gate1.in) throw std::invalid_argument("gmf: channel-width mismatch");
  return fuse(f_t, f_t1_aligned, gate_forward(params, f_t), gate_forward(params, f_t1_aligned));
}

FeatureMap relu_embed(const FeatureMap& z) { return relu_of(z); }

// --- PairNetwork -----------------------------------------------------------------

struct PairNetwork::Record {
  PfeRecord pfe_t, pfe_t1;
  EncoderRecord enc_t, enc_t1;
  std::vector<int> align;  // empty for identity
  GateRecord gate_t, gate_t1;
  FeatureMap zpre_t, zpre_t1;
  PairEmbedding emb;
};

PairNetwork::PairNetwork(const ModelParams& params) : params_(&params) {}
PairNetwork::~PairNetwork() = default;
PairNetwork::PairNetwork(PairNetwork&&) noexcept = default;
PairNetwork& PairNetwork::operator=(PairNetwork&&) noexcept = default;

bool PairNetwork::has_record() const { return record_ != nullptr; }

const PairEmbedding& PairNetwork::forward(const FrameInput& t, const FrameInput& t1,
                                          const std::vector<int>* align) {
  if (!t.pill || !t.features || !t1.pill || !t1.features) {
    throw std::invalid_argument("PairNetwork::forward: incomplete frame input");
  }
  const ModelParams& p = *params_;
  auto rec = std::make_unique<Record>();
  rec->pfe_t = pfe_run(p, *t.pill, *t.features);
  rec->pfe_t1 = pfe_run(p, *t1.pill, *t1.features);
  rec->enc_t = encoder_run(p, rec->pfe_t.out);
  rec->enc_t1 = encoder_run(p, rec->pfe_t1.out);

  PairEmbedding& e = rec->emb;
  e.f_t = rec->enc_t.out;
  if (align) {
    rec->align = *align;
    e.f_t1 = gather_cells(rec->enc_t1.out, rec->align);
  } else {
    e.f_t1 = rec->enc_t1.out;
  }

  if (p.dims.gated) {
    rec->gate_t = gate_run(p, e.f_t);
    rec->gate_t1 = gate_run(p, e.f_t1);
    e.m_t = rec->gate_t.m;
    e.m_t1 = rec->gate_t1.m;
    GmfOutput fused = fuse(e.f_t, e.f_t1, e.m_t, e.m_t1);
    rec->zpre_t = std::move(fused.z_t);
    rec->zpre_t1 = std::move(fused.z_t1);
  } else {
    e.m_t = GateMap(e.f_t.rows, e.f_t.cols);
    e.m_t1 = GateMap(e.f_t.rows, e.f_t.cols);
    rec->zpre_t = e.f_t;
    rec->zpre_t1 = e.f_t1;
  }
  e.z_t = relu_of(rec->zpre_t);
  e.z_t1 = relu_of(rec->zpre_t1);
  record_ = std::move(rec);
  return record_->emb;
}

std::vector<int> PairNetwork::branch_pattern() const {
  if (!record_) throw std::logic_error("PairNetwork::branch_pattern called without a recorded forward pass");
  const Record& r = *record_;
  std::vector<int> out;
  auto signs = [&out](const std::vector<double>& pre) {
    for (double v : pre) out.push_back(v > 0.0 ? 1 : 0);
  };
  for (const PfeRecord* pfe : {&r.pfe_t, &r.pfe_t1}) {
    signs(pfe->h1pre);
    signs(pfe->h2pre);
    out.insert(out.end(), pfe->argmax.begin(), pfe->argmax.end());
  }
  for (const EncoderRecord* enc : {&r.enc_t, &r.enc_t1}) {
    signs(enc->a1pre.data);
    signs(enc->a2pre.data);
    signs(enc->a3pre.data);
  }
  if (params_->dims.gated) {
    for (const GateRecord* gate : {&r.gate_t, &r.gate_t1}) {
      signs(gate->g1pre.data);
      signs(gate->g2pre.data);
    }
  }
  signs(r.zpre_t.data);
  signs(r.zpre_t1.data);
  return out;
}

PairGradients PairNetwork::backward(const FeatureMap& grad_z_t, const FeatureMap& grad_z_t1,
                                    bool detach_gates) const {
  if (!record_) throw std::logic_error("PairNetwork::backward called without a recorded forward pass");
  const ModelParams& p = *params_;
  const Record& r = *record_;
  require_same_shape(grad_z_t, r.emb.z_t, "backward");
  require_same_shape(grad_z_t1, r.emb.z_t1, "backward");

  PairGradients g;
  g.params = ModelParams::zeros(p.dims);
  const FeatureMap dz_t = masked_grad(r.zpre_t, grad_z_t);
  const FeatureMap dz_t1 = masked_grad(r.zpre_t1, grad_z_t1);

  if (p.dims.gated) {
    const FeatureMap& ft = r.emb.f_t;
    const FeatureMap& ft1 = r.emb.f_t1;
    const int d = ft.channels;
    g.f_t = dz_t;
    g.f_t1 = dz_t1;
    std::vector<double> dm_t(ft.cells(), 0.0), dm_t1(ft.cells(), 0.0);
    for (int k = 0; k < ft.cells(); ++k) {
      const std::size_t base = static_cast<std::size_t>(k) * d;
      for (int ch = 0; ch < d; ++ch) {
        g.f_t.data[base + ch] += r.emb.m_t.data[k] * dz_t1.data[base + ch];
        g.f_t1.data[base + ch] += r.emb.m_t1.data[k] * dz_t.data[base + ch];
        dm_t1[k] += dz_t.data[base + ch] * ft1.data[base + ch];
        dm_t[k] += dz_t1.data[base + ch] * ft.data[base + ch];
      }
    }
    if (!detach_gates) {
      const FeatureMap from_gate_t = gate_back(p, ft, r.gate_t, dm_t, g.params);
      const FeatureMap from_gate_t1 = gate_back(p, ft1, r.gate_t1, dm_t1, g.params);
      for (std::size_t i = 0; i < g.f_t.data.size(); ++i) {
        g.f_t.data[i] += from_gate_t.data[i];
        g.f_t1.data[i] += from_gate_t1.data[i];
      }
    }
  } else {
    g.f_t = dz_t;
    g.f_t1 = dz_t1;
  }

  FeatureMap d_enc_t1 = g.f_t1;
  if (!r.align.empty()) {
    d_enc_t1 = FeatureMap(g.f_t1.rows, g.f_t1.cols, g.f_t1.channels);
    for (int k = 0; k < g.f_t1.cells(); ++k) {
      if (r.align[k] < 0) continue;
      auto dst = d_enc_t1.cell(r.align[k]);
      const auto src = g.f_t1.cell(k);
      for (std::size_t ch = 0; ch < dst.size(); ++ch) dst[ch] += src[ch];
    }
  }

  const FeatureMap d_pfe_t = encoder_back(p, r.enc_t, g.f_t, g.params);
  const FeatureMap d_pfe_t1 = encoder_back(p, r.enc_t1, d_enc_t1, g.params);
  g.points_t = pfe_back(p, r.pfe_t, d_pfe_t, g.params);
  g.points_t1 = pfe_back(p, r.pfe_t1, d_pfe_t1, g.params);
  return g;
}

}  // namespace cmotion
