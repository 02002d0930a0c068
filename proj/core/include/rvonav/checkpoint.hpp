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

#ifndef RVONAV_CHECKPOINT_HPP_
#define RVONAV_CHECKPOINT_HPP_

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "rvonav/network.hpp"

namespace rvonav {

class CheckpointError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::uint32_t kCheckpointVersion = 1;

struct Checkpoint {
  nn::Network network;
  /// Free-form metadata; always carries "network" (the NetworkConfig) on load.
  nlohmann::json meta;
};

/**
 * Writes every named parameter of @p net with its shape. The layout is
 * documented in docs/checkpoint-format.md; doubles are stored verbatim so
 * a load reproduces the parameters bit for bit.
 */
void save_checkpoint(const std::filesystem::path& path, const nn::Network& net,
                     const nlohmann::json& meta = nlohmann::json::object());

Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace rvonav

#endif  // RVONAV_CHECKPOINT_HPP_
