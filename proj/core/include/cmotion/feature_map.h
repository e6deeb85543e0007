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

#ifndef CMOTION_FEATURE_MAP_H_
#define CMOTION_FEATURE_MAP_H_

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace cmotion {

// Dense rows x cols x channels tensor, channel-fastest. Row k of the flattened
// (rows*cols) x channels view is the feature of pillar k.
struct FeatureMap {
  int rows = 0;
  int cols = 0;
  int channels = 0;
  std::vector<double> data;

  FeatureMap() = default;
  FeatureMap(int r, int c, int ch, double fill = 0.0)
      : rows(r), cols(c), channels(ch), data(static_cast<std::size_t>(r) * c * ch, fill) {}

  int cells() const { return rows * cols; }
  double& at(int r, int c, int ch) { return data[(static_cast<std::size_t>(r) * cols + c) * channels + ch]; }
  double at(int r, int c, int ch) const {
    return data[(static_cast<std::size_t>(r) * cols + c) * channels + ch];
  }
  double* ptr(int r, int c) { return data.data() + (static_cast<std::size_t>(r) * cols + c) * channels; }
  const double* ptr(int r, int c) const {
    return data.data() + (static_cast<std::size_t>(r) * cols + c) * channels;
  }
  std::span<double> cell(int k) {
    return {data.data() + static_cast<std::size_t>(k) * channels, static_cast<std::size_t>(channels)};
  }
  std::span<const double> cell(int k) const {
    return {data.data() + static_cast<std::size_t>(k) * channels, static_cast<std::size_t>(channels)};
  }
  bool same_shape(const FeatureMap& o) const {
    return rows == o.rows && cols == o.cols && channels == o.channels;
  }
};

// Scalar per cell, e.g. gate values.
struct GateMap {
  int rows = 0;
  int cols = 0;
  std::vector<double> data;

  GateMap() = default;
  GateMap(int r, int c, double fill = 0.0)
      : rows(r), cols(c), data(static_cast<std::size_t>(r) * c, fill) {}
  double operator[](int k) const { return data[k]; }
  double& operator[](int k) { return data[k]; }
};

inline void require_same_shape(const FeatureMap& a, const FeatureMap& b, const char* what) {
  if (!a.same_shape(b)) throw std::invalid_argument(std::string(what) + ": feature map shape mismatch");
}

}  // namespace cmotion

#endif  // CMOTION_FEATURE_MAP_H_
