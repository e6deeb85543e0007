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

#include "cmotion/pcv_io.h"

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace cmotion {

namespace {

constexpr std::array<const char*, 6> kKnownFields = {"x", "y", "z", "fx", "fy", "fz"};

std::uint32_t to_le(std::uint32_t v) {
  if constexpr (std::endian::native == std::endian::little) return v;
  return ((v & 0xffu) << 24) | ((v & 0xff00u) << 8) | ((v >> 8) & 0xff00u) | (v >> 24);
}

}  // namespace

int PcvTable::field_index(const std::string& name) const {
  auto it = std::find(fields.begin(), fields.end(), name);
  return it == fields.end() ? -1 : static_cast<int>(it - fields.begin());
}

void write_pcv(std::ostream& out, const PcvTable& table) {
  if (table.values.size() != table.rows * table.fields.size()) {
    throw std::invalid_argument("PCV table size mismatch");
  }
  out << "PCV1 " << table.rows;
  for (const auto& f : table.fields) out << ' ' << f;
  out << '\n';
  std::vector<std::uint32_t> raw(table.values.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    raw[i] = to_le(std::bit_cast<std::uint32_t>(table.values[i]));
  }
  out.write(reinterpret_cast<const char*>(raw.data()),
            static_cast<std::streamsize>(raw.size() * sizeof(std::uint32_t)));
  if (!out) throw DataError("failed writing PCV payload");
}

PcvTable read_pcv(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) throw DataError("missing PCV header");
  std::istringstream hs(header);
  std::string magic;
  long long rows = -1;
  hs >> magic >> rows;
  if (magic != "PCV1" || rows < 0) throw DataError("bad PCV header: " + header);
  PcvTable table;
  table.rows = static_cast<std::size_t>(rows);
  for (std::string f; hs >> f;) {
    if (std::find(kKnownFields.begin(), kKnownFields.end(), f) == kKnownFields.end()) {
      throw DataError("unknown PCV field: " + f);
    }
    table.fields.push_back(f);
  }
  if (table.fields.empty()) throw DataError("PCV header declares no fields");
  std::vector<std::uint32_t> raw(table.rows * table.fields.size());
  in.read(reinterpret_cast<char*>(raw.data()),
          static_cast<std::streamsize>(raw.size() * sizeof(std::uint32_t)));
  if (static_cast<std::size_t>(in.gcount()) != raw.size() * sizeof(std::uint32_t)) {
    throw DataError("truncated PCV payload");
  }
  table.values.resize(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    table.values[i] = std::bit_cast<float>(to_le(raw[i]));
  }
  return table;
}

PcvTable to_table(const PointCloud& pc) {
  PcvTable t;
  t.fields = {"x", "y", "z"};
  if (pc.has_flow()) t.fields.insert(t.fields.end(), {"fx", "fy", "fz"});
  t.rows = pc.size();
  t.values.reserve(t.rows * t.fields.size());
  for (std::size_t i = 0; i < pc.size(); ++i) {
    for (int k = 0; k < 3; ++k) t.values.push_back(static_cast<float>(pc.points[i][k]));
    if (pc.has_flow()) {
      for (int k = 0; k < 3; ++k) t.values.push_back(static_cast<float>(pc.flow[i][k]));
    }
  }
  return t;
}

PointCloud from_table(const PcvTable& t) {
  const int x = t.field_index("x"), y = t.field_index("y"), z = t.field_index("z");
  if (x < 0 || y < 0 || z < 0) throw DataError("PCV file lacks x y z fields");
  const int fx = t.field_index("fx"), fy = t.field_index("fy"), fz = t.field_index("fz");
  const bool flow = fx >= 0 && fy >= 0 && fz >= 0;
  const std::size_t w = t.fields.size();
  PointCloud pc;
  pc.points.reserve(t.rows);
  for (std::size_t r = 0; r < t.rows; ++r) {
    const float* row = t.values.data() + r * w;
    pc.points.emplace_back(row[x], row[y], row[z]);
    if (flow) pc.flow.emplace_back(row[fx], row[fy], row[fz]);
  }
  return pc;
}

void save_point_cloud(const std::filesystem::path& path, const PointCloud& pc) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open for writing: " + path.string());
  write_pcv(out, to_table(pc));
}

PointCloud load_point_cloud(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open: " + path.string());
  return from_table(read_pcv(in));
}

void save_flow(const std::filesystem::path& path, const PointCloud& pc,
               const std::vector<Vec3>& flow) {
  if (flow.size() != pc.size()) throw std::invalid_argument("flow length mismatch");
  PointCloud copy = pc;
  copy.flow = flow;
  save_point_cloud(path, copy);
}

std::vector<Vec3> load_flow(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open: " + path.string());
  const PcvTable t = read_pcv(in);
  const int fx = t.field_index("fx"), fy = t.field_index("fy"), fz = t.field_index("fz");
  if (fx < 0 || fy < 0 || fz < 0) throw DataError("PCV file lacks flow fields: " + path.string());
  std::vector<Vec3> flow;
  flow.reserve(t.rows);
  const std::size_t w = t.fields.size();
  for (std::size_t r = 0; r < t.rows; ++r) {
    const float* row = t.values.data() + r * w;
    flow.emplace_back(row[fx], row[fy], row[fz]);
  }
  return flow;
}

}  // namespace cmotion
