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

#include "cmotion/grid.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace cmotion {

namespace {

int exact_count(double extent, double step, const char* what) {
  if (!(step > 0.0) || !(extent > 0.0)) {
    throw std::invalid_argument(std::string("grid ") + what + " must be positive");
  }
  const double n = extent / step;
  const double r = std::round(n);
  if (r < 1.0 || std::abs(n - r) > 1e-9 * std::max(1.0, r)) {
    throw std::invalid_argument(std::string("grid ") + what +
                                " is not an integer multiple of the pillar size");
  }
  return static_cast<int>(r);
}

}  // namespace

void GridSpec::validate() const {
  (void)rows();
  (void)cols();
}

int GridSpec::rows() const { return exact_count(y_max - y_min, dy, "height"); }
int GridSpec::cols() const { return exact_count(x_max - x_min, dx, "width"); }

std::optional<int> GridSpec::cell_of(double x, double y) const {
  if (!(x >= x_min && x < x_max && y >= y_min && y < y_max)) return std::nullopt;
  const int w = cols(), h = rows();
  // Rounding can push a coordinate just below the upper edge into the next cell.
  const int col = std::min(static_cast<int>(std::floor((x - x_min) / dx)), w - 1);
  const int row = std::min(static_cast<int>(std::floor((y - y_min) / dy)), h - 1);
  return row * w + col;
}

Vec2 GridSpec::center(int row, int col) const {
  return Vec2(x_min + (col + 0.5) * dx, y_min + (row + 0.5) * dy);
}

Vec2 GridSpec::center(int cell) const {
  const int w = cols();
  return center(cell / w, cell % w);
}

GridSpec GridSpec::square(double half_extent, double pillar) {
  return {-half_extent, half_extent, -half_extent, half_extent, pillar, pillar};
}

Pillarization::Pillarization(const GridSpec& grid, const PointCloud& pc)
    : rows_(grid.rows()),
      cols_(grid.cols()),
      window_center_(0.5 * (grid.x_min + grid.x_max), 0.5 * (grid.y_min + grid.y_max)) {
  const int n_cells = rows_ * cols_;
  point_cell_.resize(pc.size());
  offsets_.assign(n_cells + 1, 0);
  for (std::size_t i = 0; i < pc.size(); ++i) {
    const auto cell = grid.cell_of(pc.points[i].x(), pc.points[i].y());
    point_cell_[i] = cell ? *cell : -1;
    if (cell) ++offsets_[*cell + 1];
  }
  for (int c = 0; c < n_cells; ++c) offsets_[c + 1] += offsets_[c];
  order_.resize(offsets_[n_cells]);
  std::vector<int> cursor(offsets_.begin(), offsets_.end() - 1);
  for (std::size_t i = 0; i < pc.size(); ++i) {
    if (point_cell_[i] >= 0) order_[cursor[point_cell_[i]]++] = static_cast<int>(i);
  }
  centers_.resize(n_cells);
  for (int c = 0; c < n_cells; ++c) centers_[c] = grid.center(c / cols_, c % cols_);
}

std::vector<int> Pillarization::non_empty_cells() const {
  std::vector<int> out;
  for (int c = 0; c < cells(); ++c) {
    if (non_empty(c)) out.push_back(c);
  }
  return out;
}

std::vector<std::uint8_t> Pillarization::mask() const {
  std::vector<std::uint8_t> m(cells());
  for (int c = 0; c < cells(); ++c) m[c] = non_empty(c) ? 1 : 0;
  return m;
}

PointFeatures pfe_point_features(const PointCloud& pc, const Pillarization& pill) {
  if (pill.num_points() != pc.size()) {
    throw std::invalid_argument("pillarization was not built from this cloud");
  }
  PointFeatures out;
  out.rows.resize(pill.num_in_range());
  const auto& offsets = pill.offsets();
  const auto& order = pill.ordered_points();
  for (int cell = 0; cell < pill.cells(); ++cell) {
    const int begin = offsets[cell], end = offsets[cell + 1];
    if (begin == end) continue;
    Vec3 mean = Vec3::Zero();
    for (int k = begin; k < end; ++k) mean += pc.points[order[k]];
    mean /= static_cast<double>(end - begin);
    const Vec2& c = pill.centers()[cell];
    const Vec2& o = pill.window_center();
    for (int k = begin; k < end; ++k) {
      const Vec3& p = pc.points[order[k]];
      out.rows[k] = {p.x() - o.x(),    p.y() - o.y(),    p.z(),      p.x() - mean.x(),
                     p.y() - mean.y(), p.z() - mean.z(), p.x() - c.x(), p.y() - c.y()};
    }
  }
  return out;
}

}  // namespace cmotion
