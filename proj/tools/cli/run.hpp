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

#ifndef BDRE_TOOLS_CLI_RUN_HPP_
#define BDRE_TOOLS_CLI_RUN_HPP_

#include <string>

#include "cli/config.hpp"

namespace bdre::cli {

// File contents the command would write, provenance header included.
std::string render(const ExperimentConfig& config);

// Writes render(config) to config.output_path (temp file + rename) or to
// stdout. Module errors propagate as bdre::Error.
void run(const ExperimentConfig& config);

void write_atomic(const std::string& path, const std::string& contents);

}  // namespace bdre::cli

#endif  // BDRE_TOOLS_CLI_RUN_HPP_
