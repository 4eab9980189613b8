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

#include "cli/config.hpp"

#include <array>
#include <fstream>
#include <set>
#include <sstream>
#include <utility>

#include "bdre/errors.hpp"
#include "bdre/version.hpp"

namespace bdre::cli {

namespace {

using nlohmann::json;

constexpr std::array<std::pair<Command, std::string_view>, 8> kCommands{{
    {Command::kSurvival, "survival"},
    {Command::kSimulate, "simulate"},
    {Command::kCondition, "condition"},
    {Command::kBackbone, "backbone"},
    {Command::kAsymptotics, "asymptotics"},
    {Command::kDensity, "density"},
    {Command::kBpreConverge, "bpre-converge"},
    {Command::kRegimeTable, "regime-table"},
}};

template <typename T>
json opt(const std::optional<T>& x) {
  return x ? json(*x) : json(nullptr);
}

template <typename T>
void read_opt(const json& j, const char* key, std::optional<T>& out) {
  const auto it = j.find(key);
  if (it == j.end() || it->is_null()) return;
  out = it->get<T>();
}

template <typename T>
void read_val(const json& j, const char* key, T& out) {
  const auto it = j.find(key);
  if (it == j.end() || it->is_null()) return;
  out = it->get<T>();
}

}  // namespace

std::string_view command_name(Command c) {
  for (const auto& [cmd, name] : kCommands) {
    if (cmd == c) return name;
  }
  return "unknown";
}

Command parse_command(std::string_view name) {
  for (const auto& [cmd, n] : kCommands) {
    if (n == name) return cmd;
  }
  throw ConfigError("unknown command '" + std::string(name) + "'");
}

const std::vector<Command>& all_commands() {
  static const std::vector<Command> cmds = [] {
    std::vector<Command> v;
    for (const auto& entry : kCommands) v.push_back(entry.first);
    return v;
  }();
  return cmds;
}

std::string_view format_name(Format f) {
  return f == Format::kCsv ? "csv" : "json";
}

Format parse_format(std::string_view name) {
  if (name == "csv") return Format::kCsv;
  if (name == "json") return Format::kJson;
  throw ConfigError("format must be csv or json, got '" + std::string(name) +
                    "'");
}

Format effective_format(const ExperimentConfig& config) {
  if (config.format) return *config.format;
  return config.command == Command::kBackbone ? Format::kJson : Format::kCsv;
}

bool consumes_randomness(const ExperimentConfig& config) {
  switch (config.command) {
    case Command::kSurvival:
      return config.n.has_value() && *config.n > 0;
    case Command::kSimulate:
    case Command::kCondition:
    case Command::kBackbone:
    case Command::kBpreConverge:
    case Command::kRegimeTable:
      return true;
    case Command::kAsymptotics:
    case Command::kDensity:
      return false;
  }
  return false;
}

nlohmann::json to_json(const ExperimentConfig& c) {
  json j;
  j["command"] = std::string(command_name(c.command));
  j["alpha"] = c.params.alpha;
  j["sigma_b2"] = c.params.sigma_b2;
  j["sigma_e2"] = c.params.sigma_e2;
  j["theta"] = c.params.theta;
  j["z0"] = opt(c.z0);
  j["t"] = opt(c.t);
  j["dt"] = opt(c.dt);
  j["n"] = opt(c.n);
  j["seed"] = opt(c.seed);
  j["eps"] = opt(c.eps);
  j["beta"] = opt(c.beta);
  j["v"] = opt(c.v);
  j["a_max"] = opt(c.a_max);
  j["points"] = opt(c.points);
  j["record_every"] = c.record_every;
  j["method"] = c.method;
  j["n_list"] = c.n_list;
  j["output_path"] = c.output_path;
  j["format"] = c.format ? json(std::string(format_name(*c.format)))
                         : json(nullptr);
  return j;
}

ExperimentConfig config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  static const std::set<std::string> known{
      "command", "alpha",  "sigma_b2", "sigma_e2", "theta",        "z0",
      "t",       "horizon", "dt",      "n",        "seed",         "eps",
      "beta",    "v",      "a_max",    "points",   "record_every", "method",
      "n_list",  "output_path", "format"};
  for (const auto& item : j.items()) {
    if (!known.count(item.key())) {
      throw ConfigError("unknown config key '" + item.key() + "'");
    }
  }
  ExperimentConfig c;
  try {
    if (j.contains("command") && !j["command"].is_null()) {
      c.command = parse_command(j["command"].get<std::string>());
    }
    read_val(j, "alpha", c.params.alpha);
    read_val(j, "sigma_b2", c.params.sigma_b2);
    read_val(j, "sigma_e2", c.params.sigma_e2);
    read_val(j, "theta", c.params.theta);
    read_opt(j, "z0", c.z0);
    read_opt(j, "horizon", c.t);
    read_opt(j, "t", c.t);
    read_opt(j, "dt", c.dt);
    read_opt(j, "n", c.n);
    read_opt(j, "seed", c.seed);
    read_opt(j, "eps", c.eps);
    read_opt(j, "beta", c.beta);
    read_opt(j, "v", c.v);
    read_opt(j, "a_max", c.a_max);
    read_opt(j, "points", c.points);
    read_val(j, "record_every", c.record_every);
    read_val(j, "method", c.method);
    read_val(j, "n_list", c.n_list);
    read_val(j, "output_path", c.output_path);
    if (j.contains("format") && !j["format"].is_null()) {
      c.format = parse_format(j["format"].get<std::string>());
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad config value: ") + e.what());
  }
  return c;
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  try {
    return config_from_json(json::parse(in));
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config file '" + path + "' is not valid JSON: " +
                      e.what());
  }
}

nlohmann::json provenance(const ExperimentConfig& config) {
  json p;
  p["tool"] = "bdre";
  p["version"] = std::string(library_version());
  p["command"] = std::string(command_name(config.command));
  p["seed"] = opt(config.seed);
  p["config"] = to_json(config);
  return p;
}

ExperimentConfig read_provenance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  std::string first;
  std::getline(in, first);
  json doc;
  try {
    if (first.rfind("# ", 0) == 0) {
      doc = json::parse(first.substr(2));
    } else {
      std::stringstream rest;
      rest << first << '\n' << in.rdbuf();
      doc = json::parse(rest.str()).at("provenance");
    }
    return config_from_json(doc.at("config"));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("no provenance header in '" + path + "': " + e.what());
  }
}

}  // namespace bdre::cli
