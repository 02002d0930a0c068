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

#ifndef RVONAV_TOOLS_CLI_HPP_
#define RVONAV_TOOLS_CLI_HPP_

#include <filesystem>
#include <memory>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "rvonav/config.hpp"
#include "rvonav/episode.hpp"
#include "rvonav/policy.hpp"

namespace rvonav::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;      ///< Bad config, checkpoint or CSV.
inline constexpr int kExitDiverged = 3;   ///< Training produced a non-finite loss.

class CliError : public std::runtime_error {
 public:
  CliError(int code, const std::string& what) : std::runtime_error(what), code_(code) {}
  int code() const { return code_; }

 private:
  int code_;
};

/// Loads a checkpoint; optionally insists on the variant it was trained for.
std::unique_ptr<NetworkPolicy> load_network_policy(const std::filesystem::path& checkpoint,
                                                   std::optional<Variant> expected = {});

std::unique_ptr<Policy> make_policy(const ExperimentConfig& cfg);

/**
 * Evaluates @p policy over every (scenario, robot count) pair the config
 * asks for. Writes metrics.csv, timing.csv and up to cfg.records episode
 * records per pair into @p out_dir when it is non-empty.
 */
std::vector<EvalReport> run_evaluation(const ExperimentConfig& cfg, Policy& policy,
                                       const std::string& label,
                                       const std::filesystem::path& out_dir);

/// Entry point shared by the binary and the tests.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace rvonav::cli

#endif  // RVONAV_TOOLS_CLI_HPP_
