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

#include <cstring>
#include <filesystem>
#include <sstream>

#include <gtest/gtest.h>

#include "cmotion/pcv_io.h"
#include "cmotion/synthetic_scene.h"
#include "test_util.h"

namespace cmotion {
namespace {

TEST(PcvTest, HeaderAndPayloadLayout) {
  PcvTable t;
  t.fields = {"x", "y", "z"};
  t.rows = 2;
  t.values = {1.0f, 2.0f, 3.0f, -1.5f, 0.25f, 8.0f};
  std::ostringstream os;
  write_pcv(os, t);
  const std::string s = os.str();
  const std::string header = "PCV1 2 x y z\n";
  ASSERT_EQ(s.substr(0, header.size()), header);
  ASSERT_EQ(s.size(), header.size() + 6 * sizeof(float));
  float first;
  std::memcpy(&first, s.data() + header.size(), sizeof(float));
  EXPECT_EQ(first, 1.0f);  // little-endian host
}

TEST(PcvTest, TableRoundTripIsBitwise) {
  const PointCloud pc = synth_scene(random_scene(3, 6.0, 3.0, 4), 0.5, 0.5);
  std::ostringstream os;
  write_pcv(os, to_table(pc));
  std::istringstream is(os.str());
  const PcvTable back = read_pcv(is);
  const PcvTable ref = to_table(pc);
  EXPECT_EQ(back.fields, ref.fields);
  ASSERT_EQ(back.values.size(), ref.values.size());
  EXPECT_EQ(std::memcmp(back.values.data(), ref.values.data(), ref.values.size() * sizeof(float)), 0);
  const PointCloud restored = from_table(back);
  EXPECT_EQ(restored.size(), pc.size());
  EXPECT_TRUE(restored.has_flow());
}

TEST(PcvTest, RejectsMalformedInput) {
  std::istringstream bad_magic("PCV9 1 x y z\n");
  EXPECT_THROW(read_pcv(bad_magic), DataError);
  std::istringstream unknown_field("PCV1 1 x q z\n");
  EXPECT_THROW(read_pcv(unknown_field), DataError);
  std::istringstream truncated("PCV1 4 x y z\nabc");
  EXPECT_THROW(read_pcv(truncated), DataError);
  std::istringstream no_xyz("PCV1 0 fx fy fz\n");
  EXPECT_THROW(from_table(read_pcv(no_xyz)), DataError);
}

TEST(PcvTest, FileRoundTrip) {
  const auto dir = std::filesystem::temp_directory_path() / "cmotion_pcv_test";
  std::filesystem::create_directories(dir);
  const PointCloud pc = testing::random_cloud(40, 5.0, 9);
  save_point_cloud(dir / "a.pcv", pc);
  const PointCloud back = load_point_cloud(dir / "a.pcv");
  ASSERT_EQ(back.size(), pc.size());
  for (std::size_t i = 0; i < pc.size(); ++i) {
    EXPECT_EQ(back.points[i].x(), static_cast<double>(static_cast<float>(pc.points[i].x())));
  }
  std::vector<Vec3> flow(pc.size(), Vec3(0.25, -0.5, 0.0));
  save_flow(dir / "f.pcv", pc, flow);
  EXPECT_EQ(load_flow(dir / "f.pcv"), flow);
  EXPECT_THROW(load_flow(dir / "a.pcv"), DataError);
  EXPECT_THROW(load_point_cloud(dir / "missing.pcv"), DataError);
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace cmotion
