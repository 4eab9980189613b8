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

#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "bdre/errors.hpp"
#include "cli/config.hpp"
#include "cli/run.hpp"

namespace {

struct Flags {
  std::string config_path;
  std::optional<double> alpha, sigma_e2, sigma_b2, theta;
  std::optional<double> z0, t, dt, eps, beta, v, a_max;
  std::optional<std::size_t> n, points, record_every;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> method, output_path, format;
  std::vector<std::int64_t> n_list;
};

void add_flags(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config_path, "JSON config file");
  sub->add_option("--alpha", f.alpha, "environment drift");
  sub->add_option("--sigma-e2", f.sigma_e2, "environment variance rate");
  sub->add_option("--sigma-b2", f.sigma_b2, "branching variance rate");
  sub->add_option("--theta", f.theta, "immigration rate");
  sub->add_option("--z0,--z", f.z0, "initial mass");
  sub->add_option("--t,--horizon", f.t, "time or horizon");
  sub->add_option("--dt", f.dt, "time step (default: automatic)");
  sub->add_option("--n", f.n, "number of paths or replicas");
  sub->add_option("--seed", f.seed, "RNG seed");
  sub->add_option("--eps", f.eps, "excursion start level (backbone)");
  sub->add_option("--beta", f.beta, "drift of the exponential functional");
  sub->add_option("--v", f.v, "time of the exponential functional");
  sub->add_option("--a-max", f.a_max, "upper end of the density grid");
  sub->add_option("--points", f.points, "grid size");
  sub->add_option("--record-every", f.record_every,
                  "store every k-th step of each path");
  sub->add_option("--method", f.method, "simulate: euler or time-change");
  sub->add_option("--n-list", f.n_list, "bpre-converge scaling list")
      ->delimiter(',');
  sub->add_option("--output-path,-o", f.output_path,
                  "output file (default: stdout)");
  sub->add_option("--format", f.format, "csv or json");
}

template <typename T>
void take(const std::optional<T>& from, T& to) {
  if (from) to = *from;
}

template <typename T>
void take(const std::optional<T>& from, std::optional<T>& to) {
  if (from) to = from;
}

bdre::cli::ExperimentConfig merge(const Flags& f, bdre::cli::Command cmd) {
  using bdre::cli::ExperimentConfig;
  ExperimentConfig c;
  if (!f.config_path.empty()) {
    c = bdre::cli::load_config_file(f.config_path);
  }
  c.command = cmd;
  take(f.alpha, c.params.alpha);
  take(f.sigma_e2, c.params.sigma_e2);
  take(f.sigma_b2, c.params.sigma_b2);
  take(f.theta, c.params.theta);
  take(f.z0, c.z0);
  take(f.t, c.t);
  take(f.dt, c.dt);
  take(f.n, c.n);
  take(f.seed, c.seed);
  take(f.eps, c.eps);
  take(f.beta, c.beta);
  take(f.v, c.v);
  take(f.a_max, c.a_max);
  take(f.points, c.points);
  take(f.record_every, c.record_every);
  take(f.method, c.method);
  take(f.output_path, c.output_path);
  if (f.format) c.format = bdre::cli::parse_format(*f.format);
  if (!f.n_list.empty()) c.n_list = f.n_list;
  return c;
}

int fail(const std::string& kind, const std::string& message, int code) {
  nlohmann::json e;
  e["error"] = kind;
  e["message"] = message;
  e["exit_code"] = code;
  std::cerr << e.dump() << '\n';
  return code;
}

std::string_view describe(bdre::cli::Command c) {
  using bdre::cli::Command;
  switch (c) {
    case Command::kSurvival: return "survival probability by quadrature";
    case Command::kSimulate: return "Euler or time-change sample paths";
    case Command::kCondition: return "paths conditioned on non-extinction";
    case Command::kBackbone: return "excursion backbone construction";
    case Command::kAsymptotics: return "limit constants and conditioned drift";
    case Command::kDensity: return "density of 1/(2A)";
    case Command::kBpreConverge: return "discrete-to-diffusion convergence";
    case Command::kRegimeTable: return "one row per regime";
  }
  return "";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Branching diffusions in random environment"};
  app.require_subcommand(1);
  Flags flags;
  for (bdre::cli::Command cmd : bdre::cli::all_commands()) {
    add_flags(app.add_subcommand(std::string(bdre::cli::command_name(cmd)),
                                 std::string(describe(cmd))),
              flags);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail("config", e.what(), 2);
  }
  try {
    const auto cmd =
        bdre::cli::parse_command(app.get_subcommands().front()->get_name());
    bdre::cli::run(merge(flags, cmd));
  } catch (const bdre::Error& e) {
    return fail(e.kind(), e.what(), e.exit_code());
  } catch (const std::exception& e) {
    return fail("internal", e.what(), 1);
  }
  return 0;
}
