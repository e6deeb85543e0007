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

#include <random>

#include <benchmark/benchmark.h>

#include "cmotion/feature_map.h"
#include "cmotion/layers.h"

namespace cmotion {
namespace {

Conv3x3 random_conv(int in, int out) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> normal(0.0, 0.1);
  Conv3x3 c(in, out);
  for (double& w : c.weight) w = normal(rng);
  for (double& b : c.bias) b = normal(rng);
  return c;
}

FeatureMap random_input(int n, int ch) {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> normal;
  FeatureMap x(n, n, ch);
  for (double& v : x.data) v = normal(rng);
  return x;
}

// Args: grid side, channels.
void BM_Conv3x3Forward(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int ch = static_cast<int>(state.range(1));
  const Conv3x3 conv = random_conv(ch, ch);
  const FeatureMap x = random_input(n, ch);
  for (auto _ : state) benchmark::DoNotOptimize(conv3x3_forward(conv, x));
}
BENCHMARK(BM_Conv3x3Forward)->Args({64, 32})->Args({128, 32})->Args({256, 32})->Unit(benchmark::kMillisecond);

void BM_Conv3x3Backward(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int ch = static_cast<int>(state.range(1));
  const Conv3x3 conv = random_conv(ch, ch);
  const FeatureMap x = random_input(n, ch);
  const FeatureMap g = random_input(n, ch);
  Conv3x3 grad(ch, ch);
  for (auto _ : state) benchmark::DoNotOptimize(conv3x3_backward(conv, x, g, grad));
}
BENCHMARK(BM_Conv3x3Backward)->Args({64, 32})->Args({128, 32})->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace cmotion
