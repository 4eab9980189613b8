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

#ifndef BDRE_ENV_PATH_HPP_
#define BDRE_ENV_PATH_HPP_

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "bdre/model.hpp"
#include "bdre/rng.hpp"

namespace bdre {

// Number of dt-steps in [0, horizon] (tolerant to representation error).
std::size_t step_count(double horizon, double dt);

// Discretized environment S on the grid 0, dt, ..., with S_0 = 0.
struct EnvPath {
  double dt = 0.0;
  std::vector<double> values;
  double drift = 0.0;
  double vol2 = 0.0;
  StreamId seed_record;

  double horizon() const { return dt * static_cast<double>(values.size() - 1); }
};

// Cumulative tau(t) = int_0^t sigma_b2 exp(-S_s) ds on the path grid.
struct TimeChangeGrid {
  double dt = 0.0;
  std::vector<double> tau_values;
};

struct ExpFunctionalSample {
  double beta = 0.0;
  double v = 0.0;
  double value = 0.0;
};

// Brownian motion with the given drift and variance rate.
EnvPath sample_drifted_path(double drift, double vol2, double horizon,
                            double dt, RandomStream& rng);

// Environment of the model: drift alpha, variance rate sigma_e2.
EnvPath sample_env_path(const ModelParams& params, double horizon, double dt,
                        RandomStream& rng);

// Trapezoidal cumulative integral of sigma_b2 * exp(-S).
TimeChangeGrid time_change(const EnvPath& path, double sigma_b2);

// Trapezoidal int_0^T (sigma_b2 / 2) exp(-S_s) ds over the whole path.
double half_time_change_total(const EnvPath& path, double sigma_b2);

// A_v^{(beta)} = int_0^v exp(2 (beta s + W_s)) ds along a sampled standard
// Brownian path (trapezoidal rule).
ExpFunctionalSample sample_exp_functional(double beta, double v, double dt,
                                          RandomStream& rng);

// Same functional along a caller-supplied driver W on the grid k * dt
// (w.size() = steps + 1).
double exp_functional_along(double beta, double dt,
                            const std::vector<double>& w);

// Writes "t,S" rows.
void write_env_path_csv(std::ostream& out, const EnvPath& path);

}  // namespace bdre

#endif  // BDRE_ENV_PATH_HPP_
