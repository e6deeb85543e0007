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

#ifndef CMOTION_GRID_H_
#define CMOTION_GRID_H_

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "cmotion/point_cloud.h"

namespace cmotion {

// Half-open BEV window [x_min, x_max) x [y_min, y_max) split into pillars.
// Cell (row, col) covers y in [y_min + row*dy, ...) and x in [x_min + col*dx, ...).
// Flattened index is row * cols + col.
struct GridSpec {
  double x_min = -32.0;
  double x_max = 32.0;
  double y_min = -32.0;
  double y_max = 32.0;
  double dx = 0.25;
  double dy = 0.25;

  // Throws unless both dimensions are exact positive integers.
  void validate() const;
  int rows() const;
  int cols() const;
  int cells() const { return rows() * cols(); }

  std::optional<int> cell_of(double x, double y) const;
  Vec2 center(int cell) const;
  Vec2 center(int row, int col) const;
  int index(int row, int col) const { return row * cols() + col; }

  static GridSpec square(double half_extent, double pillar);
};

// Point-to-pillar assignment stored as a CSR list ordered by cell, then by
// point index.
class Pillarization {
 public:
  Pillarization() = default;
  Pillarization(const GridSpec& grid, const PointCloud& pc);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int cells() const { return rows_ * cols_; }

  std::span<const int> points_in(int cell) const {
    return {order_.data() + offsets_[cell], order_.data() + offsets_[cell + 1]};
  }
  bool non_empty(int cell) const { return offsets_[cell + 1] > offsets_[cell]; }
  // -1 for points outside the grid.
  int cell_of_point(int point) const { return point_cell_[point]; }
  std::size_t num_points() const { return point_cell_.size(); }
  std::size_t num_in_range() const { return order_.size(); }

  // All point indices grouped by cell; slot k of this list is the k-th CSR entry.
  const std::vector<int>& ordered_points() const { return order_; }
  const std::vector<int>& offsets() const { return offsets_; }
  std::vector<int> non_empty_cells() const;
  std::vector<std::uint8_t> mask() const;
  const std::vector<Vec2>& centers() const { return centers_; }
  // Center of the grid window; point features are expressed relative to it.
  const Vec2& window_center() const { return window_center_; }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<int> point_cell_;
  std::vector<int> offsets_;
  std::vector<int> order_;
  std::vector<Vec2> centers_;
  Vec2 window_center_ = Vec2::Zero();
};

inline Pillarization pillarize(const PointCloud& pc, const GridSpec& grid) {
  return Pillarization(grid, pc);
}

inline constexpr int kPointFeatureDim = 8;
using PointFeature = std::array<double, kPointFeatureDim>;

// Decorated per-point inputs (x, y, z, x-x̄, y-ȳ, z-z̄, x-cx, y-cy) aligned with
// Pillarization::ordered_points(). x and y are taken relative to the grid
// window center, so moving a scene together with its window leaves them unchanged.
struct PointFeatures {
  std::vector<PointFeature> rows;
};

PointFeatures pfe_point_features(const PointCloud& pc, const Pillarization& pill);

}  // namespace cmotion

#endif  // CMOTION_GRID_H_
