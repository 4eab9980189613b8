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

#include "bdre/env_path.hpp"

#include <cmath>
#include <ostream>

#include <fmt/format.h>

#include "bdre/errors.hpp"
#include "bdre/quadrature.hpp"

namespace bdre {

std::size_t step_count(double horizon, double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw DomainError("dt must be finite and > 0");
  }
  if (!(horizon > 0.0) || !std::isfinite(horizon)) {
    throw DomainError("horizon must be finite and > 0");
  }
  const double ratio = horizon / dt;
  if (ratio < 1.0 - 1e-9) throw DomainError("horizon must be >= dt");
  if (ratio > 1e9) throw ConfigError("too many time steps (horizon / dt > 1e9)");
  return static_cast<std::size_t>(std::floor(ratio + 1e-9));
}

EnvPath sample_drifted_path(double drift, double vol2, double horizon,
                            double dt, RandomStream& rng) {
  if (!(vol2 >= 0.0)) throw DomainError("variance rate must be >= 0");
  const std::size_t n = step_count(horizon, dt);
  EnvPath p;
  p.dt = dt;
  p.drift = drift;
  p.vol2 = vol2;
  p.seed_record = rng.id();
  p.values.resize(n + 1);
  p.values[0] = 0.0;
  const double mean = drift * dt;
  const double sd = std::sqrt(vol2 * dt);
  double s = 0.0;
  for (std::size_t k = 1; k <= n; ++k) {
    s += mean + sd * rng.normal();
    p.values[k] = s;
  }
  return p;
}

EnvPath sample_env_path(const ModelParams& params, double horizon, double dt,
                        RandomStream& rng) {
  params.validate();
  return sample_drifted_path(params.alpha, params.sigma_e2, horizon, dt, rng);
}

TimeChangeGrid time_change(const EnvPath& path, double sigma_b2) {
  if (path.values.empty()) throw DomainError("time_change: empty path");
  TimeChangeGrid g;
  g.dt = path.dt;
  g.tau_values.resize(path.values.size());
  g.tau_values[0] = 0.0;
  CompensatedSum acc;
  double prev = std::exp(-path.values[0]);
  for (std::size_t k = 1; k < path.values.size(); ++k) {
    const double cur = std::exp(-path.values[k]);
    acc += 0.5 * path.dt * sigma_b2 * (prev + cur);
    g.tau_values[k] = acc.value();
    prev = cur;
  }
  return g;
}

double half_time_change_total(const EnvPath& path, double sigma_b2) {
  if (path.values.size() < 2) {
    throw DomainError("environment path must cover a positive horizon");
  }
  CompensatedSum acc;
  const std::size_t n = path.values.size() - 1;
  for (std::size_t k = 0; k <= n; ++k) {
    const double w = (k == 0 || k == n) ? 0.5 : 1.0;
    acc += w * std::exp(-path.values[k]);
  }
  return 0.5 * sigma_b2 * path.dt * acc.value();
}

double exp_functional_along(double beta, double dt,
                            const std::vector<double>& w) {
  if (w.size() < 2) throw DomainError("exp functional needs >= 2 grid points");
  CompensatedSum acc;
  const std::size_t n = w.size() - 1;
  for (std::size_t k = 0; k <= n; ++k) {
    const double s = dt * static_cast<double>(k);
    const double weight = (k == 0 || k == n) ? 0.5 : 1.0;
    acc += weight * std::exp(2.0 * (beta * s + w[k]));
  }
  return dt * acc.value();
}

ExpFunctionalSample sample_exp_functional(double beta, double v, double dt,
                                          RandomStream& rng) {
  const std::size_t n = step_count(v, dt);
  const double sd = std::sqrt(dt);
  CompensatedSum acc;
  double w = 0.0;
  acc += 0.5;  // k = 0 term, exp(0)
  for (std::size_t k = 1; k <= n; ++k) {
    w += sd * rng.normal();
    const double s = dt * static_cast<double>(k);
    const double weight = (k == n) ? 0.5 : 1.0;
    acc += weight * std::exp(2.0 * (beta * s + w));
  }
  return ExpFunctionalSample{beta, dt * static_cast<double>(n),
                             dt * acc.value()};
}

void write_env_path_csv(std::ostream& out, const EnvPath& path) {
  out << "t,S\n";
  for (std::size_t k = 0; k < path.values.size(); ++k) {
    out << fmt::format("{:.17g},{:.17g}\n", path.dt * static_cast<double>(k),
                       path.values[k]);
  }
}

}  // namespace bdre
