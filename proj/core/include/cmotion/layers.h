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

#ifndef CMOTION_LAYERS_H_
#define CMOTION_LAYERS_H_

#include <vector>

#include "cmotion/feature_map.h"

namespace cmotion {

// Fully connected layer; weight is in x out, row-major.
struct Dense {
  int in = 0;
  int out = 0;
  std::vector<double> weight;
  std::vector<double> bias;

  Dense() = default;
  Dense(int in_dim, int out_dim)
      : in(in_dim), out(out_dim), weight(static_cast<std::size_t>(in_dim) * out_dim), bias(out_dim) {}
  bool empty() const { return in == 0 && out == 0; }
};

// Stride-1, zero-padded 3x3 convolution. weight holds 9 taps of in x out
// row-major blocks, tap = (ky * 3 + kx) with ky, kx in {0, 1, 2} covering the
// offsets -1, 0, +1.
struct Conv3x3 {
  int in = 0;
  int out = 0;
  std::vector<double> weight;
  std::vector<double> bias;

  Conv3x3() = default;
  Conv3x3(int in_dim, int out_dim)
      : in(in_dim), out(out_dim), weight(9 * static_cast<std::size_t>(in_dim) * out_dim), bias(out_dim) {}
  bool empty() const { return in == 0 && out == 0; }
};

// x is n x in row-major; returns n x out.
std::vector<double> dense_forward(const Dense& layer, const std::vector<double>& x, int n);
// Accumulates parameter gradients into `grad`; returns dL/dx.
std::vector<double> dense_backward(const Dense& layer, const std::vector<double>& x, int n,
                                   const std::vector<double>& grad_out, Dense& grad);

FeatureMap conv3x3_forward(const Conv3x3& layer, const FeatureMap& x);
FeatureMap conv3x3_backward(const Conv3x3& layer, const FeatureMap& x, const FeatureMap& grad_out,
                            Conv3x3& grad);

void relu_inplace(std::vector<double>& v);
// grad *= (pre > 0)
void relu_backward_inplace(const std::vector<double>& pre, std::vector<double>& grad);

double sigmoid(double x);

}  // namespace cmotion

#endif  // CMOTION_LAYERS_H_
