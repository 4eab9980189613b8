// Copyright 2026 The bdre Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef BDRE_TOOLS_CLI_CONFIG_HPP_
#define BDRE_TOOLS_CLI_CONFIG_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "bdre/model.hpp"

namespace bdre::cli {

enum class Command {
  kSurvival,
  kSimulate,
  kCondition,
  kBackbone,
  kAsymptotics,
  kDensity,
  kBpreConverge,
  kRegimeTable,
};

enum class Format { kCsv, kJson };

std::string_view command_name(Command c);
Command parse_command(std::string_view name);
const std::vector<Command>& all_commands();

std::string_view format_name(Format f);
Format parse_format(std::string_view name);

struct ExperimentConfig {
  Command command = Command::kSurvival;
  ModelParams params{};
  std::optional<double> z0;
  std::optional<double> t;  // horizon for path commands
  std::optional<double> dt;
  std::optional<std::size_t> n;
  std::optional<std::uint64_t> seed;
  std::optional<double> eps;
  std::optional<double> beta;
  std::optional<double> v;
  std::optional<double> a_max;
  std::optional<std::size_t> points;
  std::size_t record_every = 0;
  std::string method = "euler";
  std::vector<std::int64_t> n_list;
  std::string output_path;  // empty writes to stdout
  std::optional<Format> format;  // unset picks the command default
};

Format effective_format(const ExperimentConfig& config);

bool consumes_randomness(const ExperimentConfig& config);

nlohmann::json to_json(const ExperimentConfig& config);

// Strict: unknown keys and wrong types are config errors.
ExperimentConfig config_from_json(const nlohmann::json& j);

ExperimentConfig load_config_file(const std::string& path);

// {"tool", "version", "command", "seed", "config"}.
nlohmann::json provenance(const ExperimentConfig& config);

// Recovers the config from an output file: the "# {...}" first line of a
// CSV, or the "provenance" member of a JSON document.
ExperimentConfig read_provenance(const std::string& path);

}  // namespace bdre::cli

#endif  // BDRE_TOOLS_CLI_CONFIG_HPP_
