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

#include "cmotion/checkpoint.h"

#include <bit>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cmotion/pcv_io.h"

namespace cmotion {

namespace {

using nlohmann::json;

std::uint32_t le32(std::uint32_t v) {
  if constexpr (std::endian::native == std::endian::little) return v;
  return ((v & 0xffu) << 24) | ((v & 0xff00u) << 8) | ((v >> 8) & 0xff00u) | (v >> 24);
}

json dims_to_json(const NetworkDims& d) {
  return {{"pfe_hidden", d.pfe_hidden},         {"pfe_out", d.pfe_out},
          {"encoder_hidden", d.encoder_hidden}, {"feature_dim", d.feature_dim},
          {"gate_hidden", d.gate_hidden},       {"gated", d.gated}};
}

NetworkDims dims_from_json(const json& j) {
  NetworkDims d;
  d.pfe_hidden = j.at("pfe_hidden").get<int>();
  d.pfe_out = j.at("pfe_out").get<int>();
  d.encoder_hidden = j.at("encoder_hidden").get<int>();
  d.feature_dim = j.at("feature_dim").get<int>();
  d.gate_hidden = j.at("gate_hidden").get<int>();
  d.gated = j.at("gated").get<bool>();
  return d;
}

}  // namespace

void write_checkpoint(std::ostream& out, const ModelParams& params, const CheckpointMeta& meta) {
  json manifest;
  manifest["format"] = "contrastmotion-checkpoint";
  manifest["dims"] = dims_to_json(params.dims);
  manifest["seed"] = meta.seed;
  manifest["steps"] = meta.steps;
  json blocks = json::array();
  params.for_each_block([&blocks](const std::string& name, const std::vector<double>& b) {
    blocks.push_back({{"name", name}, {"size", b.size()}});
  });
  manifest["blocks"] = blocks;
  const std::string text = manifest.dump();
  out << "CMCK1 " << text.size() << '\n' << text;
  params.for_each_block([&out](const std::string&, const std::vector<double>& b) {
    std::vector<std::uint32_t> raw(b.size());
    for (std::size_t i = 0; i < b.size(); ++i) {
      raw[i] = le32(std::bit_cast<std::uint32_t>(static_cast<float>(b[i])));
    }
    out.write(reinterpret_cast<const char*>(raw.data()),
              static_cast<std::streamsize>(raw.size() * sizeof(std::uint32_t)));
  });
  if (!out) throw DataError("failed writing checkpoint");
}

ModelParams read_checkpoint(std::istream& in, CheckpointMeta* meta) {
  std::string line;
  if (!std::getline(in, line)) throw DataError("empty checkpoint");
  std::istringstream hs(line);
  std::string magic;
  std::size_t len = 0;
  if (!(hs >> magic >> len) || magic != "CMCK1") throw DataError("not a checkpoint file");
  std::string text(len, '\0');
  in.read(text.data(), static_cast<std::streamsize>(len));
  if (static_cast<std::size_t>(in.gcount()) != len) throw DataError("truncated checkpoint manifest");
  json manifest;
  try {
    manifest = json::parse(text);
  } catch (const json::exception& e) {
    throw DataError(std::string("bad checkpoint manifest: ") + e.what());
  }
  ModelParams params = ModelParams::zeros(dims_from_json(manifest.at("dims")));
  if (meta) {
    meta->seed = manifest.value("seed", std::uint64_t{0});
    meta->steps = manifest.value("steps", std::uint64_t{0});
  }
  const json& blocks = manifest.at("blocks");
  std::size_t idx = 0;
  params.for_each_block([&](const std::string& name, std::vector<double>& b) {
    if (idx >= blocks.size() || blocks[idx].at("name") != name ||
        blocks[idx].at("size").get<std::size_t>() != b.size()) {
      throw DataError("checkpoint block mismatch at " + name);
    }
    ++idx;
    std::vector<std::uint32_t> raw(b.size());
    in.read(reinterpret_cast<char*>(raw.data()),
            static_cast<std::streamsize>(raw.size() * sizeof(std::uint32_t)));
    if (static_cast<std::size_t>(in.gcount()) != raw.size() * sizeof(std::uint32_t)) {
      throw DataError("truncated checkpoint block " + name);
    }
    for (std::size_t i = 0; i < b.size(); ++i) b[i] = std::bit_cast<float>(le32(raw[i]));
  });
  if (idx != blocks.size()) throw DataError("checkpoint has unexpected extra blocks");
  return params;
}

void save_checkpoint(const std::filesystem::path& path, const ModelParams& params,
                     const CheckpointMeta& meta) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open for writing: " + path.string());
  write_checkpoint(out, params, meta);
}

ModelParams load_checkpoint(const std::filesystem::path& path, CheckpointMeta* meta) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open checkpoint: " + path.string());
  return read_checkpoint(in, meta);
}

}  // namespace cmotion
