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

#include "cmotion/layers.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Core>

namespace cmotion {

namespace {

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MapMat = Eigen::Map<RowMat>;
using ConstMapMat = Eigen::Map<const RowMat>;
using ConstMapVec = Eigen::Map<const Eigen::RowVectorXd>;

// Valid output column range and row offset of one 3x3 tap.
struct TapSpan {
  int dy;
  int dx;
  int col_begin;
  int col_end;
};

TapSpan tap_span(int tap, int cols) {
  const int dy = tap / 3 - 1;
  const int dx = tap % 3 - 1;
  return {dy, dx, std::max(0, -dx), std::min(cols, cols - dx)};
}

// Fixed-order column sums. Eigen's vectorized reductions choose their split
// from the buffer address, which breaks run-to-run bitwise reproducibility.
void add_column_sums(const double* m, int rows, int cols, std::vector<double>& into) {
  for (int r = 0; r < rows; ++r) {
    const double* row = m + static_cast<std::size_t>(r) * cols;
    for (int c = 0; c < cols; ++c) into[c] += row[c];
  }
}

}  // namespace

std::vector<double> dense_forward(const Dense& layer, const std::vector<double>& x, int n) {
  if (x.size() != static_cast<std::size_t>(n) * layer.in) {
    throw std::invalid_argument("dense_forward: input width mismatch");
  }
  std::vector<double> y(static_cast<std::size_t>(n) * layer.out);
  if (n == 0) return y;
  MapMat out(y.data(), n, layer.out);
  out.noalias() = ConstMapMat(x.data(), n, layer.in) * ConstMapMat(layer.weight.data(), layer.in, layer.out);
  out.rowwise() += ConstMapVec(layer.bias.data(), layer.out);
  return y;
}

std::vector<double> dense_backward(const Dense& layer, const std::vector<double>& x, int n,
                                   const std::vector<double>& grad_out, Dense& grad) {
  std::vector<double> gx(static_cast<std::size_t>(n) * layer.in);
  if (n == 0) return gx;
  ConstMapMat gy(grad_out.data(), n, layer.out);
  ConstMapMat xm(x.data(), n, layer.in);
  MapMat(grad.weight.data(), layer.in, layer.out).noalias() += xm.transpose() * gy;
  add_column_sums(grad_out.data(), n, layer.out, grad.bias);
  MapMat(gx.data(), n, layer.in).noalias() =
      gy * ConstMapMat(layer.weight.data(), layer.in, layer.out).transpose();
  return gx;
}

FeatureMap conv3x3_forward(const Conv3x3& layer, const FeatureMap& x) {
  if (x.channels != layer.in) throw std::invalid_argument("conv3x3: channel-width mismatch");
  FeatureMap y(x.rows, x.cols, layer.out);
  const int cin = layer.in, cout = layer.out;
  {
    MapMat out(y.data.data(), x.cells(), cout);
    out.rowwise() = ConstMapVec(layer.bias.data(), cout);
  }
  for (int tap = 0; tap < 9; ++tap) {
    const TapSpan s = tap_span(tap, x.cols);
    const int n = s.col_end - s.col_begin;
    if (n <= 0) continue;
    ConstMapMat w(layer.weight.data() + static_cast<std::size_t>(tap) * cin * cout, cin, cout);
    for (int r = std::max(0, -s.dy); r < std::min(x.rows, x.rows - s.dy); ++r) {
      MapMat out(y.ptr(r, s.col_begin), n, cout);
      ConstMapMat in(x.ptr(r + s.dy, s.col_begin + s.dx), n, cin);
      out.noalias() += in * w;
    }
  }
  return y;
}

FeatureMap conv3x3_backward(const Conv3x3& layer, const FeatureMap& x, const FeatureMap& grad_out,
                            Conv3x3& grad) {
  const int cin = layer.in, cout = layer.out;
  FeatureMap gx(x.rows, x.cols, cin);
  add_column_sums(grad_out.data.data(), grad_out.cells(), cout, grad.bias);
  for (int tap = 0; tap < 9; ++tap) {
    const TapSpan s = tap_span(tap, x.cols);
    const int n = s.col_end - s.col_begin;
    if (n <= 0) continue;
    ConstMapMat w(layer.weight.data() + static_cast<std::size_t>(tap) * cin * cout, cin, cout);
    MapMat gw(grad.weight.data() + static_cast<std::size_t>(tap) * cin * cout, cin, cout);
    for (int r = std::max(0, -s.dy); r < std::min(x.rows, x.rows - s.dy); ++r) {
      ConstMapMat gy(grad_out.ptr(r, s.col_begin), n, cout);
      ConstMapMat in(x.ptr(r + s.dy, s.col_begin + s.dx), n, cin);
      MapMat gin(gx.ptr(r + s.dy, s.col_begin + s.dx), n, cin);
      gw.noalias() += in.transpose() * gy;
      gin.noalias() += gy * w.transpose();
    }
  }
  return gx;
}

void relu_inplace(std::vector<double>& v) {
  for (double& x : v) x = x > 0.0 ? x : 0.0;
}

void relu_backward_inplace(const std::vector<double>& pre, std::vector<double>& grad) {
  for (std::size_t i = 0; i < grad.size(); ++i) {
    if (!(pre[i] > 0.0)) grad[i] = 0.0;
  }
}

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

}  // namespace cmotion
