// Copyright 2026 The rvo-nav Authors.
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

#include "rvonav/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <map>

#include "rvonav/config.hpp"

namespace rvonav {

namespace {

constexpr char kMagic[8] = {'R', 'V', 'O', 'N', 'A', 'V', 'C', 'K'};
constexpr std::uint64_t kMaxDim = std::uint64_t{1} << 32;

static_assert(std::endian::native == std::endian::little,
              "checkpoint I/O assumes a little-endian host");

template <typename T>
void put(std::ostream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T take(std::istream& in, const std::string& what) {
  T v{};
  if (!in.read(reinterpret_cast<char*>(&v), sizeof(T))) {
    throw CheckpointError("checkpoint truncated while reading " + what);
  }
  return v;
}

std::string take_string(std::istream& in, std::uint64_t n, const std::string& what) {
  if (n > (std::uint64_t{1} << 30)) throw CheckpointError("checkpoint: implausible " + what + " size");
  std::string s(n, '\0');
  if (n > 0 && !in.read(s.data(), static_cast<std::streamsize>(n))) {
    throw CheckpointError("checkpoint truncated while reading " + what);
  }
  return s;
}

}  // namespace

void save_checkpoint(const std::filesystem::path& path, const nn::Network& net,
                     const nlohmann::json& meta) {
  nlohmann::json full = meta.is_object() ? meta : nlohmann::json::object();
  full["network"] = to_json(net.config());
  const std::string text = full.dump();

  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw CheckpointError("cannot write checkpoint: " + path.string());

  out.write(kMagic, sizeof(kMagic));
  put<std::uint32_t>(out, kCheckpointVersion);
  put<std::uint64_t>(out, text.size());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));

  const auto params = net.named_parameters();
  put<std::uint64_t>(out, params.size());
  for (const auto& [name, t] : params) {
    put<std::uint32_t>(out, static_cast<std::uint32_t>(name.size()));
    out.write(name.data(), static_cast<std::streamsize>(name.size()));
    put<std::uint32_t>(out, 2);
    put<std::uint64_t>(out, static_cast<std::uint64_t>(t.rows()));
    put<std::uint64_t>(out, static_cast<std::uint64_t>(t.cols()));
    out.write(reinterpret_cast<const char*>(t.value().data()),
              static_cast<std::streamsize>(t.value().size() * sizeof(double)));
  }
  if (!out) throw CheckpointError("failed writing checkpoint: " + path.string());
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CheckpointError("cannot open checkpoint: " + path.string());

  char magic[8];
  if (!in.read(magic, sizeof(magic)) || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw CheckpointError("not a checkpoint file: " + path.string());
  }
  const auto version = take<std::uint32_t>(in, "version");
  if (version != kCheckpointVersion) {
    throw CheckpointError("unsupported checkpoint version " + std::to_string(version));
  }
  const auto meta_len = take<std::uint64_t>(in, "metadata length");
  nlohmann::json meta;
  try {
    meta = nlohmann::json::parse(take_string(in, meta_len, "metadata"));
  } catch (const nlohmann::json::exception& e) {
    throw CheckpointError(std::string("checkpoint metadata: ") + e.what());
  }
  if (!meta.contains("network")) throw CheckpointError("checkpoint metadata lacks 'network'");

  nn::NetworkConfig cfg;
  try {
    cfg = network_config_from_json(meta.at("network"));
  } catch (const ConfigError& e) {
    throw CheckpointError(std::string("checkpoint metadata: ") + e.what());
  }
  Checkpoint ck{nn::Network(cfg), meta};

  std::map<std::string, nn::Tensor> slots;
  for (auto& [name, t] : ck.network.named_parameters()) slots.emplace(name, t);

  const auto count = take<std::uint64_t>(in, "tensor count");
  if (count != slots.size()) {
    throw CheckpointError("checkpoint holds " + std::to_string(count) + " tensors, network expects " +
                          std::to_string(slots.size()));
  }
  for (std::uint64_t i = 0; i < count; ++i) {
    const auto name_len = take<std::uint32_t>(in, "tensor name length");
    const std::string name = take_string(in, name_len, "tensor name");
    const auto rank = take<std::uint32_t>(in, "rank");
    if (rank != 2) throw CheckpointError("tensor " + name + ": rank must be 2");
    const auto rows = take<std::uint64_t>(in, "rows");
    const auto cols = take<std::uint64_t>(in, "cols");
    auto it = slots.find(name);
    if (it == slots.end()) throw CheckpointError("unexpected tensor " + name);
    nn::Tensor& t = it->second;
    if (rows >= kMaxDim || cols >= kMaxDim || static_cast<Eigen::Index>(rows) != t.rows() ||
        static_cast<Eigen::Index>(cols) != t.cols()) {
      throw CheckpointError("tensor " + name + ": shape mismatch");
    }
    if (!in.read(reinterpret_cast<char*>(t.mutable_value().data()),
                 static_cast<std::streamsize>(rows * cols * sizeof(double)))) {
      throw CheckpointError("checkpoint truncated in tensor " + name);
    }
    slots.erase(it);
  }
  return ck;
}

}  // namespace rvonav
