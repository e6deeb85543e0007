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

#ifndef CMOTION_PCV_IO_H_
#define CMOTION_PCV_IO_H_

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "cmotion/point_cloud.h"

namespace cmotion {

// PCV1 layout: one ASCII header line `PCV1 <num_points> <field> <field> ...\n`,
// then num_points records of little-endian float32 values in field order.
// Fields are drawn from {x, y, z, fx, fy, fz}.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PcvTable {
  std::vector<std::string> fields;
  std::size_t rows = 0;
  std::vector<float> values;  // row-major, rows x fields.size()

  int field_index(const std::string& name) const;
};

void write_pcv(std::ostream& out, const PcvTable& table);
PcvTable read_pcv(std::istream& in);

// Writes x y z, plus fx fy fz when the cloud carries flow.
void save_point_cloud(const std::filesystem::path& path, const PointCloud& pc);
PointCloud load_point_cloud(const std::filesystem::path& path);

// Cloud with flow replaced by `flow`; written as x y z fx fy fz.
void save_flow(const std::filesystem::path& path, const PointCloud& pc,
               const std::vector<Vec3>& flow);
// Reads the fx fy fz columns.
std::vector<Vec3> load_flow(const std::filesystem::path& path);

PcvTable to_table(const PointCloud& pc);
PointCloud from_table(const PcvTable& table);

}  // namespace cmotion

#endif  // CMOTION_PCV_IO_H_
