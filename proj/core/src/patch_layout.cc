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

#include "cmotion/patch_layout.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cmotion {

int PatchLayout::patch_of(int cell) const {
  const int r = cell / cols, c = cell % cols;
  return (r / patch_size) * patches_per_row + c / patch_size;
}

bool PatchLayout::key_contains(int patch, int cell) const {
  return keys[patch].contains(cell / cols, cell % cols);
}

namespace {

std::vector<int> window_cells(const CellWindow& w, int cols) {
  std::vector<int> out;
  out.reserve(w.size());
  for (int r = w.row_begin; r < w.row_end; ++r) {
    for (int c = w.col_begin; c < w.col_end; ++c) out.push_back(r * cols + c);
  }
  return out;
}

}  // namespace

std::vector<int> PatchLayout::query_cells(int patch) const { return window_cells(queries[patch], cols); }
std::vector<int> PatchLayout::key_cells(int patch) const { return window_cells(keys[patch], cols); }

PatchLayout build_layout(int rows, int cols, int patch_size, double key_scale) {
  if (patch_size <= 0) throw std::invalid_argument("patch size must be positive");
  if (!(key_scale > 1.0)) throw std::invalid_argument("key patch scale must exceed 1");
  PatchLayout layout;
  layout.rows = rows;
  layout.cols = cols;
  layout.patch_size = patch_size;
  layout.key_scale = key_scale;
  const int pr = (rows + patch_size - 1) / patch_size;
  const int pc = (cols + patch_size - 1) / patch_size;
  layout.patches_per_row = pc;
  const int key_side = static_cast<int>(std::lround(key_scale * patch_size));
  const int grow_low = (key_side - patch_size) / 2;
  const int grow_high = key_side - patch_size - grow_low;
  for (int i = 0; i < pr; ++i) {
    for (int j = 0; j < pc; ++j) {
      CellWindow q{i * patch_size, std::min(rows, (i + 1) * patch_size), j * patch_size,
                   std::min(cols, (j + 1) * patch_size)};
      CellWindow k{std::max(0, q.row_begin - grow_low),
                   std::min(rows, i * patch_size + patch_size + grow_high),
                   std::max(0, q.col_begin - grow_low),
                   std::min(cols, j * patch_size + patch_size + grow_high)};
      layout.queries.push_back(q);
      layout.keys.push_back(k);
    }
  }
  return layout;
}

PatchLayout build_layout(const GridSpec& grid, int patch_size, double key_scale) {
  return build_layout(grid.rows(), grid.cols(), patch_size, key_scale);
}

}  // namespace cmotion
