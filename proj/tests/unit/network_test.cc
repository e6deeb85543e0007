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

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Geometry>
#include <gtest/gtest.h>

#include "cmotion/grid.h"
#include "cmotion/layers.h"
#include "cmotion/network.h"
#include "test_util.h"

namespace cmotion {
namespace {

using testing::random_cloud;
using testing::random_map;

NetworkDims small_dims(bool gated = true) {
  NetworkDims d;
  d.pfe_hidden = 5;
  d.pfe_out = 4;
  d.encoder_hidden = 6;
  d.feature_dim = 4;
  d.gate_hidden = 3;
  d.gated = gated;
  return d;
}

// Randomizes biases too so no layer sits at an exact ReLU kink by construction.
ModelParams random_params(const NetworkDims& dims, std::uint64_t seed) {
  ModelParams p = ModelParams::init(dims, seed);
  std::mt19937_64 rng(seed + 1000);
  std::uniform_real_distribution<double> u(-0.1, 0.3);
  p.for_each_block([&](const std::string& name, std::vector<double>& v) {
    if (name.ends_with("bias")) {
      for (double& b : v) b = u(rng);
    }
  });
  return p;
}

std::vector<double> mlp_oracle(const ModelParams& p, const PointFeature& x) {
  std::vector<double> h(p.pfe1.out), y(p.pfe2.out);
  for (int o = 0; o < p.pfe1.out; ++o) {
    double s = p.pfe1.bias[o];
    for (int i = 0; i < p.pfe1.in; ++i) s += x[i] * p.pfe1.weight[i * p.pfe1.out + o];
    h[o] = std::max(0.0, s);
  }
  for (int o = 0; o < p.pfe2.out; ++o) {
    double s = p.pfe2.bias[o];
    for (int i = 0; i < p.pfe2.in; ++i) s += h[i] * p.pfe2.weight[i * p.pfe2.out + o];
    y[o] = std::max(0.0, s);
  }
  return y;
}

FeatureMap conv_oracle(const Conv3x3& layer, const FeatureMap& x) {
  FeatureMap y(x.rows, x.cols, layer.out);
  for (int r = 0; r < x.rows; ++r) {
    for (int c = 0; c < x.cols; ++c) {
      for (int o = 0; o < layer.out; ++o) {
        double s = layer.bias[o];
        for (int ky = 0; ky < 3; ++ky) {
          for (int kx = 0; kx < 3; ++kx) {
            const int rr = r + ky - 1, cc = c + kx - 1;
            if (rr < 0 || cc < 0 || rr >= x.rows || cc >= x.cols) continue;
            for (int i = 0; i < layer.in; ++i) {
              s += x.at(rr, cc, i) * layer.weight[((ky * 3 + kx) * layer.in + i) * layer.out + o];
            }
          }
        }
        y.at(r, c, o) = s;
      }
    }
  }
  return y;
}

TEST(PfeForwardTest, SinglePointEqualsPerceptronOutput) {
  const ModelParams p = random_params(small_dims(), 1);
  const GridSpec g = GridSpec::square(1.0, 0.25);
  PointCloud pc;
  pc.points.emplace_back(0.3, -0.2, 0.9);
  const Pillarization pill = pillarize(pc, g);
  const PointFeatures feats = pfe_point_features(pc, pill);
  const FeatureMap f = pfe_forward(p, pill, feats);
  const auto expected = mlp_oracle(p, feats.rows[0]);
  const int cell = pill.cell_of_point(0);
  for (int ch = 0; ch < f.channels; ++ch) EXPECT_NEAR(f.cell(cell)[ch], expected[ch], 1e-12);
  for (int k = 0; k < f.cells(); ++k) {
    if (k == cell) continue;
    for (double v : f.cell(k)) EXPECT_EQ(v, 0.0);
  }
}

TEST(PfeForwardTest, MatchesLoopMaxOracle) {
  const ModelParams p = random_params(small_dims(), 2);
  const GridSpec g = GridSpec::square(1.0, 0.25);
  const PointCloud pc = random_cloud(60, 1.0, 3);
  const Pillarization pill = pillarize(pc, g);
  const PointFeatures feats = pfe_point_features(pc, pill);
  const FeatureMap f = pfe_forward(p, pill, feats);
  const auto& order = pill.ordered_points();
  for (int cell = 0; cell < pill.cells(); ++cell) {
    std::vector<double> best(f.channels, -1.0);
    for (int k = pill.offsets()[cell]; k < pill.offsets()[cell + 1]; ++k) {
      const auto y = mlp_oracle(p, feats.rows[k]);
      for (int ch = 0; ch < f.channels; ++ch) best[ch] = std::max(best[ch], y[ch]);
    }
    for (int ch = 0; ch < f.channels; ++ch) {
      EXPECT_NEAR(f.cell(cell)[ch], pill.non_empty(cell) ? best[ch] : 0.0, 1e-6);
    }
  }
  EXPECT_EQ(order.size(), pc.size());
}

TEST(PfeForwardTest, DuplicatesAndPermutationLeaveOutputUnchanged) {
  const ModelParams p = random_params(small_dims(), 4);
  const GridSpec g = GridSpec::square(1.0, 0.25);
  const PointCloud pc = random_cloud(40, 1.0, 5);
  const Pillarization pill = pillarize(pc, g);
  const FeatureMap base = pfe_forward(p, pill, pfe_point_features(pc, pill));

  PointCloud doubled = pc;
  doubled.points.insert(doubled.points.end(), pc.points.begin(), pc.points.end());
  const Pillarization pill2 = pillarize(doubled, g);
  const FeatureMap dup = pfe_forward(p, pill2, pfe_point_features(doubled, pill2));

  PointCloud shuffled = pc;
  std::mt19937_64 rng(6);
  std::shuffle(shuffled.points.begin(), shuffled.points.end(), rng);
  const Pillarization pill3 = pillarize(shuffled, g);
  const FeatureMap perm = pfe_forward(p, pill3, pfe_point_features(shuffled, pill3));

  for (std::size_t i = 0; i < base.data.size(); ++i) {
    EXPECT_NEAR(dup.data[i], base.data[i], 1e-12);
    EXPECT_NEAR(perm.data[i], base.data[i], 1e-12);
  }
}

TEST(ConvTest, FiveByFiveSingleChannelMatchesSlidingWindow) {
  Conv3x3 layer(1, 1);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1, 1);
  for (double& w : layer.weight) w = u(rng);
  layer.bias[0] = 0.25;
  const FeatureMap x = random_map(5, 5, 1, 8, -1, 1);
  const FeatureMap y = conv3x3_forward(layer, x);
  const FeatureMap expected = conv_oracle(layer, x);
  for (std::size_t i = 0; i < y.data.size(); ++i) EXPECT_NEAR(y.data[i], expected.data[i], 1e-12);
}

TEST(ConvTest, MultiChannelMatchesSlidingWindow) {
  Conv3x3 layer(3, 4);
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-1, 1);
  for (double& w : layer.weight) w = u(rng);
  for (double& b : layer.bias) b = u(rng);
  const FeatureMap x = random_map(6, 7, 3, 10, -1, 1);
  const FeatureMap y = conv3x3_forward(layer, x);
  const FeatureMap expected = conv_oracle(layer, x);
  for (std::size_t i = 0; i < y.data.size(); ++i) EXPECT_NEAR(y.data[i], expected.data[i], 1e-12);
}

TEST(ConvTest, RejectsChannelMismatch) {
  EXPECT_THROW(conv3x3_forward(Conv3x3(3, 2), FeatureMap(4, 4, 2)), std::invalid_argument);
}

TEST(EncoderTest, ZeroInputZeroBiasGivesZero) {
  const ModelParams p = ModelParams::init(small_dims(), 11);
  const FeatureMap out = encoder_forward(p, FeatureMap(6, 6, p.dims.pfe_out));
  for (double v : out.data) EXPECT_EQ(v, 0.0);
}

TEST(EncoderTest, DefaultOutputShape) {
  const ModelParams p = ModelParams::init(NetworkDims{}, 12);
  const FeatureMap out = encoder_forward(p, random_map(256, 256, 32, 13));
  EXPECT_EQ(out.rows, 256);
  EXPECT_EQ(out.cols, 256);
  EXPECT_EQ(out.channels, 32);
}

TEST(EncoderTest, IntegerShiftEquivarianceAwayFromBorders) {
  const ModelParams p = random_params(small_dims(), 14);
  const FeatureMap x = random_map(12, 12, p.dims.pfe_out, 15);
  FeatureMap shifted(12, 12, x.channels);
  for (int r = 0; r < 12; ++r) {
    for (int c = 2; c < 12; ++c) {
      for (int ch = 0; ch < x.channels; ++ch) shifted.at(r, c, ch) = x.at(r, c - 2, ch);
    }
  }
  const FeatureMap a = encoder_forward(p, x);
  const FeatureMap b = encoder_forward(p, shifted);
  // Three 3x3 layers see 3 cells; skip the border band on both sides.
  for (int r = 3; r < 9; ++r) {
    for (int c = 5; c < 9; ++c) {
      for (int ch = 0; ch < a.channels; ++ch) EXPECT_NEAR(b.at(r, c, ch), a.at(r, c - 2, ch), 1e-12);
    }
  }
}

TEST(EncoderTest, SceneAndWindowTranslatedTogetherGiveSameFeatures) {
  const ModelParams p = random_params(small_dims(), 16);
  const GridSpec g = GridSpec::square(2.0, 0.25);
  GridSpec moved = g;
  moved.x_min += 0.75;
  moved.x_max += 0.75;
  moved.y_min -= 0.5;
  moved.y_max -= 0.5;
  const PointCloud pc = random_cloud(120, 2.0, 17);
  const PointCloud pc_moved = apply_transform(pc, RigidTransform::translate(0.75, -0.5));
  const Pillarization a = pillarize(pc, g);
  const Pillarization b = pillarize(pc_moved, moved);
  const FeatureMap fa = encoder_forward(p, pfe_forward(p, a, pfe_point_features(pc, a)));
  const FeatureMap fb = encoder_forward(p, pfe_forward(p, b, pfe_point_features(pc_moved, b)));
  for (std::size_t i = 0; i < fa.data.size(); ++i) EXPECT_NEAR(fa.data[i], fb.data[i], 1e-5);
}

TEST(AlignTest, IdentityReturnsInput) {
  const GridSpec g = GridSpec::square(1.0, 0.25);
  const FeatureMap f = random_map(8, 8, 3, 18);
  const FeatureMap out = align_to_frame(f, RigidTransform::identity(), g);
  EXPECT_EQ(out.data, f.data);
}

TEST(AlignTest, OnePillarShiftDisplacesOneColumn) {
  const GridSpec g = GridSpec::square(1.0, 0.25);
  const FeatureMap f = random_map(8, 8, 2, 19, 0.5, 1.0);
  const FeatureMap out = align_to_frame(f, RigidTransform::translate(0.25, 0.0), g);
  for (int r = 0; r < 8; ++r) {
    for (int ch = 0; ch < 2; ++ch) EXPECT_EQ(out.at(r, 0, ch), 0.0);
    for (int c = 1; c < 8; ++c) {
      for (int ch = 0; ch < 2; ++ch) EXPECT_EQ(out.at(r, c, ch), f.at(r, c - 1, ch));
    }
  }
}

TEST(AlignTest, RotationMatchesPerCellLookupOracle) {
  const GridSpec g = GridSpec::square(2.0, 0.25);
  const FeatureMap f = random_map(16, 16, 2, 20);
  const RigidTransform ego{0.1, Vec3(0.0, 0.0, 0.0), 1.0};
  const FeatureMap out = align_to_frame(f, ego, g);
  const Eigen::Rotation2Dd back(-0.1);
  for (int r = 0; r < 16; ++r) {
    for (int c = 0; c < 16; ++c) {
      const Vec2 src = back * Vec2(-2.0 + (c + 0.5) * 0.25, -2.0 + (r + 0.5) * 0.25);
      const double sc = std::floor((src.x() + 2.0) / 0.25), sr = std::floor((src.y() + 2.0) / 0.25);
      const bool inside = sc >= 0 && sc < 16 && sr >= 0 && sr < 16;
      for (int ch = 0; ch < 2; ++ch) {
        const double expected = inside ? f.at(static_cast<int>(sr), static_cast<int>(sc), ch) : 0.0;
        EXPECT_EQ(out.at(r, c, ch), expected) << r << "," << c;
      }
    }
  }
}

TEST(GmfTest, SaturatedNegativeGateLeavesFeatures) {
  ModelParams p = random_params(small_dims(), 21);
  p.gate_out.bias[0] = -60.0;
  const FeatureMap ft = random_map(6, 6, 4, 22);
  const FeatureMap ft1 = random_map(6, 6, 4, 23);
  const GmfOutput out = gmf(p, ft, ft1);
  for (std::size_t i = 0; i < ft.data.size(); ++i) {
    EXPECT_NEAR(out.z_t.data[i], ft.data[i], 1e-6);
    EXPECT_NEAR(out.z_t1.data[i], ft1.data[i], 1e-6);
  }
}

TEST(GmfTest, HalfGatesGiveOnePointFiveTimes) {
  const FeatureMap f = random_map(5, 5, 3, 24);
  const GateMap half(5, 5, 0.5);
  const GmfOutput out = fuse(f, f, half, half);
  for (std::size_t i = 0; i < f.data.size(); ++i) {
    EXPECT_DOUBLE_EQ(out.z_t.data[i], 1.5 * f.data[i]);
    EXPECT_DOUBLE_EQ(out.z_t1.data[i], 1.5 * f.data[i]);
  }
}

TEST(GmfTest, MatchesScalarOracleAndGatesInOpenInterval) {
  const ModelParams p = random_params(small_dims(), 25);
  const FeatureMap ft = random_map(7, 7, 4, 26);
  const FeatureMap ft1 = random_map(7, 7, 4, 27);
  const GmfOutput out = gmf(p, ft, ft1);
  const GateMap mt = gate_forward(p, ft), mt1 = gate_forward(p, ft1);
  for (int k = 0; k < ft.cells(); ++k) {
    EXPECT_GT(out.m_t[k], 0.0);
    EXPECT_LT(out.m_t[k], 1.0);
    EXPECT_EQ(out.m_t[k], mt[k]);
    EXPECT_EQ(out.m_t1[k], mt1[k]);
    for (int ch = 0; ch < 4; ++ch) {
      EXPECT_NEAR(out.z_t.cell(k)[ch], ft.cell(k)[ch] + mt1[k] * ft1.cell(k)[ch], 1e-12);
      EXPECT_NEAR(out.z_t1.cell(k)[ch], ft1.cell(k)[ch] + mt[k] * ft.cell(k)[ch], 1e-12);
    }
  }
}

TEST(GmfTest, DisabledGmfIsExactPassThrough) {
  const ModelParams p = random_params(small_dims(false), 28);
  const FeatureMap ft = random_map(5, 5, 4, 29);
  const FeatureMap ft1 = random_map(5, 5, 4, 30);
  const GmfOutput out = gmf(p, ft, ft1);
  EXPECT_EQ(out.z_t.data, ft.data);
  EXPECT_EQ(out.z_t1.data, ft1.data);
  EXPECT_THROW(gate_forward(p, ft), std::logic_error);
}

TEST(GmfTest, ShapeMismatchThrows) {
  const ModelParams p = random_params(small_dims(), 31);
  EXPECT_THROW(gmf(p, FeatureMap(4, 4, 4), FeatureMap(4, 5, 4)), std::invalid_argument);
}

TEST(ReluEmbedTest, ElementwiseRectifier) {
  const FeatureMap z = random_map(4, 4, 3, 32, -1.0, 1.0);
  const FeatureMap out = relu_embed(z);
  for (std::size_t i = 0; i < z.data.size(); ++i) EXPECT_EQ(out.data[i], z.data[i] > 0 ? z.data[i] : 0.0);
  const FeatureMap pos = random_map(4, 4, 3, 33);
  EXPECT_EQ(relu_embed(pos).data, pos.data);
  FeatureMap neg(1, 1, 1, -1.0);
  EXPECT_EQ(relu_embed(neg).data[0], 0.0);
}

struct PairFixture {
  GridSpec grid = GridSpec::square(1.0, 0.25);  // 8x8
  PointCloud pc_t, pc_t1;
  Pillarization pill_t, pill_t1;
  PointFeatures feat_t, feat_t1;

  explicit PairFixture(std::uint64_t seed) {
    pc_t = random_cloud(90, 1.0, seed, 0.2, 1.8);
    pc_t1 = apply_transform(random_cloud(90, 1.0, seed, 0.2, 1.8), RigidTransform::translate(0.2, -0.1));
    pill_t = pillarize(pc_t, grid);
    pill_t1 = pillarize(pc_t1, grid);
    feat_t = pfe_point_features(pc_t, pill_t);
    feat_t1 = pfe_point_features(pc_t1, pill_t1);
  }
};

double dot(const FeatureMap& a, const FeatureMap& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.data.size(); ++i) s += a.data[i] * b.data[i];
  return s;
}

TEST(BackwardTest, WithoutForwardThrows) {
  const ModelParams p = ModelParams::init(small_dims(), 34);
  const PairNetwork net(p);
  EXPECT_FALSE(net.has_record());
  EXPECT_THROW(net.backward(FeatureMap(8, 8, 4), FeatureMap(8, 8, 4)), std::logic_error);
}

TEST(BackwardTest, ConstantLossGivesZeroGradients) {
  const ModelParams p = random_params(small_dims(), 35);
  PairFixture fx(36);
  PairNetwork net(p);
  const PairEmbedding& e = net.forward({&fx.pill_t, &fx.feat_t}, {&fx.pill_t1, &fx.feat_t1});
  const PairGradients g = net.backward(FeatureMap(e.z_t.rows, e.z_t.cols, e.z_t.channels),
                                       FeatureMap(e.z_t.rows, e.z_t.cols, e.z_t.channels));
  g.params.for_each_block([](const std::string&, const std::vector<double>& v) {
    for (double x : v) EXPECT_EQ(x, 0.0);
  });
}

TEST(BackwardTest, DetachedGateGradientEqualsGate) {
  const ModelParams p = random_params(small_dims(), 37);
  PairFixture fx(38);
  PairNetwork net(p);
  const PairEmbedding& e = net.forward({&fx.pill_t, &fx.feat_t}, {&fx.pill_t1, &fx.feat_t1});
  FeatureMap ones(e.z_t.rows, e.z_t.cols, e.z_t.channels, 1.0);
  const PairGradients g = net.backward(ones, FeatureMap(e.z_t.rows, e.z_t.cols, e.z_t.channels), true);
  for (int k = 0; k < e.z_t.cells(); ++k) {
    for (int ch = 0; ch < e.z_t.channels; ++ch) {
      if (e.z_t.cell(k)[ch] <= 0.0) continue;
      EXPECT_DOUBLE_EQ(g.f_t1.cell(k)[ch], e.m_t1[k]);
    }
  }
}

// Linear readout of both embeddings; checks every parameter and input gradient
// against central differences.
void check_finite_differences(bool gated, const std::vector<int>* align) {
  ModelParams p = random_params(small_dims(gated), 39);
  PairFixture fx(40);
  const FeatureMap gt = random_map(8, 8, 4, 41, -1, 1);
  const FeatureMap gt1 = random_map(8, 8, 4, 42, -1, 1);
  auto loss = [&](const ModelParams& q, const PointFeatures& a, const PointFeatures& b) {
    PairNetwork net(q);
    const PairEmbedding& e = net.forward({&fx.pill_t, &a}, {&fx.pill_t1, &b}, align);
    return dot(e.z_t, gt) + dot(e.z_t1, gt1);
  };
  PairNetwork net(p);
  net.forward({&fx.pill_t, &fx.feat_t}, {&fx.pill_t1, &fx.feat_t1}, align);
  const PairGradients g = net.backward(gt, gt1);

  const double h = 1e-7;
  auto close = [](double analytic, double numeric) {
    return std::abs(analytic - numeric) <= 1e-4 * std::max(1.0, std::abs(numeric));
  };
  std::vector<std::vector<double>*> blocks;
  std::vector<std::string> names;
  p.for_each_block([&](const std::string& n, std::vector<double>& v) {
    blocks.push_back(&v);
    names.push_back(n);
  });
  std::vector<const std::vector<double>*> grads;
  g.params.for_each_block([&](const std::string&, const std::vector<double>& v) { grads.push_back(&v); });
  ASSERT_EQ(blocks.size(), grads.size());
  int bad = 0;
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    for (std::size_t i = 0; i < blocks[b]->size(); ++i) {
      const double orig = (*blocks[b])[i];
      (*blocks[b])[i] = orig + h;
      const double up = loss(p, fx.feat_t, fx.feat_t1);
      (*blocks[b])[i] = orig - h;
      const double down = loss(p, fx.feat_t, fx.feat_t1);
      (*blocks[b])[i] = orig;
      const double numeric = (up - down) / (2 * h);
      if (!close((*grads[b])[i], numeric) && ++bad <= 5) {
        ADD_FAILURE() << names[b] << "[" << i << "] analytic " << (*grads[b])[i] << " numeric " << numeric;
      }
    }
  }
  for (int frame = 0; frame < 2; ++frame) {
    PointFeatures feats = frame == 0 ? fx.feat_t : fx.feat_t1;
    const auto& analytic = frame == 0 ? g.points_t : g.points_t1;
    for (std::size_t k = 0; k < feats.rows.size(); ++k) {
      for (int d = 0; d < kPointFeatureDim; ++d) {
        const double orig = feats.rows[k][d];
        feats.rows[k][d] = orig + h;
        const double up = frame == 0 ? loss(p, feats, fx.feat_t1) : loss(p, fx.feat_t, feats);
        feats.rows[k][d] = orig - h;
        const double down = frame == 0 ? loss(p, feats, fx.feat_t1) : loss(p, fx.feat_t, feats);
        feats.rows[k][d] = orig;
        const double numeric = (up - down) / (2 * h);
        if (!close(analytic[k][d], numeric) && ++bad <= 5) {
          ADD_FAILURE() << "frame " << frame << " point " << k << " dim " << d << " analytic "
                        << analytic[k][d] << " numeric " << numeric;
        }
      }
    }
  }
  EXPECT_EQ(bad, 0);
}

TEST(BackwardTest, GatedMatchesFiniteDifferences) { check_finite_differences(true, nullptr); }

TEST(BackwardTest, UngatedMatchesFiniteDifferences) { check_finite_differences(false, nullptr); }

TEST(BackwardTest, AlignedMatchesFiniteDifferences) {
  const std::vector<int> align = alignment_sources(RigidTransform::translate(0.25, 0.25), GridSpec::square(1.0, 0.25));
  check_finite_differences(true, &align);
}

TEST(BackwardTest, BranchPatternTracksRectifierFlips) {
  ModelParams p = random_params(small_dims(), 43);
  PairFixture fx(44);
  PairNetwork a(p);
  a.forward({&fx.pill_t, &fx.feat_t}, {&fx.pill_t1, &fx.feat_t1});
  PairNetwork b(p);
  b.forward({&fx.pill_t, &fx.feat_t}, {&fx.pill_t1, &fx.feat_t1});
  const std::vector<int> base = a.branch_pattern();
  EXPECT_EQ(base, b.branch_pattern());
  // A large negative output bias switches every final rectifier off.
  for (double& v : p.enc3.bias) v = -1e6;
  PairNetwork c(p);
  const PairEmbedding& e = c.forward({&fx.pill_t, &fx.feat_t}, {&fx.pill_t1, &fx.feat_t1});
  EXPECT_EQ(base.size(), c.branch_pattern().size());
  EXPECT_NE(base, c.branch_pattern());
  for (double v : e.z_t.data) EXPECT_EQ(v, 0.0);
  EXPECT_THROW(PairNetwork(p).branch_pattern(), std::logic_error);
}

TEST(ModelParamsTest, BlockNamesFollowGating) {
  std::vector<std::string> gated, plain;
  ModelParams::init(small_dims(true), 1).for_each_block(
      [&](const std::string& n, const std::vector<double>&) { gated.push_back(n); });
  ModelParams::init(small_dims(false), 1).for_each_block(
      [&](const std::string& n, const std::vector<double>&) { plain.push_back(n); });
  EXPECT_EQ(gated.size(), 16u);
  EXPECT_EQ(plain.size(), 10u);
  for (const auto& n : plain) EXPECT_EQ(n.find("gate"), std::string::npos);
}

TEST(ModelParamsTest, InitIsBoundedAndSeeded) {
  const ModelParams a = ModelParams::init(NetworkDims{}, 5);
  const ModelParams b = ModelParams::init(NetworkDims{}, 5);
  EXPECT_EQ(a.enc2.weight, b.enc2.weight);
  const double bound = 1.0 / std::sqrt(9.0 * a.enc2.in);
  for (double w : a.enc2.weight) EXPECT_LE(std::abs(w), bound);
  for (double v : a.enc2.bias) EXPECT_EQ(v, 0.0);
  EXPECT_TRUE(a.all_finite());
}

}  // namespace
}  // namespace cmotion
