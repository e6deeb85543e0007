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

#ifndef CMOTION_CHECKPOINT_H_
#define CMOTION_CHECKPOINT_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>

#include "cmotion/network.h"

namespace cmotion {

struct CheckpointMeta {
  std::uint64_t seed = 0;
  std::uint64_t steps = 0;
};

// Layout: the line `CMCK1 <manifest bytes>`, a JSON manifest (dims, seed, steps,
// and an ordered list of {name, size} blocks), then every block as
// little-endian float32 in manifest order.
void write_checkpoint(std::ostream& out, const ModelParams& params, const CheckpointMeta& meta);
ModelParams read_checkpoint(std::istream& in, CheckpointMeta* meta = nullptr);

void save_checkpoint(const std::filesystem::path& path, const ModelParams& params,
                     const CheckpointMeta& meta);
ModelParams load_checkpoint(const std::filesystem::path& path, CheckpointMeta* meta = nullptr);

}  // namespace cmotion

#endif  // CMOTION_CHECKPOINT_H_
