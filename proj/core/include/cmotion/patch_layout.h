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

#ifndef CMOTION_PATCH_LAYOUT_H_
#define CMOTION_PATCH_LAYOUT_H_

#include <vector>

#include "cmotion/grid.h"

namespace cmotion {

// Half-open row/column window of the grid.
struct CellWindow {
  int row_begin = 0;
  int row_end = 0;
  int col_begin = 0;
  int col_end = 0;

  bool contains(int row, int col) const {
    return row >= row_begin && row < row_end && col >= col_begin && col < col_end;
  }
  int size() const { return (row_end - row_begin) * (col_end - col_begin); }
};

// Query patches tile the grid in s x s blocks (the last row/column of patches
// may be narrower). Each key patch is the concentric round(alpha*s) square
// window around its query patch, clipped at the grid border.
struct PatchLayout {
  int rows = 0;
  int cols = 0;
  int patch_size = 0;
  double key_scale = 0.0;
  int patches_per_row = 0;
  std::vector<CellWindow> queries;
  std::vector<CellWindow> keys;

  int num_patches() const { return static_cast<int>(queries.size()); }
  int patch_of(int cell) const;
  bool key_contains(int patch, int cell) const;
  std::vector<int> query_cells(int patch) const;
  std::vector<int> key_cells(int patch) const;
};

// Throws std::invalid_argument when patch_size <= 0 or key_scale <= 1.
PatchLayout build_layout(const GridSpec& grid, int patch_size, double key_scale);
PatchLayout build_layout(int rows, int cols, int patch_size, double key_scale);

}  // namespace cmotion

#endif  // CMOTION_PATCH_LAYOUT_H_
