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

#ifndef BDRE_SRC_SIM_GRID_HPP_
#define BDRE_SRC_SIM_GRID_HPP_

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "bdre/errors.hpp"
#include "bdre/model.hpp"
#include "bdre/rng.hpp"
#include "bdre/simulate.hpp"

namespace bdre::detail {

inline double resolve_dt(const ModelParams& params, double dt) {
  return dt > 0.0 ? dt : default_dt(params);
}

inline void check_config(const ModelParams& params, double z0,
                  const SimulationConfig& config, double dt) {
  params.validate();
  if (!(z0 >= 0.0) || !std::isfinite(z0)) {
    throw DomainError("initial mass must be finite and >= 0");
  }
  if (!(dt < config.horizon)) {
    throw DomainError("dt must be smaller than the horizon");
  }
  if (config.n == 0) throw ConfigError("number of paths must be >= 1");
}

// Indices of stored grid points among 0..steps.
inline std::vector<std::size_t> record_indices(std::size_t steps,
                                        std::size_t every) {
  std::vector<std::size_t> idx;
  if (every == 0) {
    idx = {0, steps};
  } else {
    for (std::size_t k = 0; k <= steps; k += every) idx.push_back(k);
    if (idx.back() != steps) idx.push_back(steps);
  }
  return idx;
}

inline TrajectorySet make_set(double dt, std::size_t steps,
                       const std::vector<std::size_t>& idx,
                       const SimulationConfig& config) {
  TrajectorySet set;
  set.dt = dt;
  set.horizon = dt * static_cast<double>(steps);
  set.seed = config.seed;
  set.times.reserve(idx.size());
  for (std::size_t k : idx) set.times.push_back(dt * static_cast<double>(k));
  set.paths.resize(config.n);
  return set;
}

inline StreamId replica_stream(std::uint64_t seed, std::size_t replica,
                        StreamTag tag) {
  return StreamId{seed, static_cast<std::uint64_t>(replica), tag, 0};
}

}  // namespace bdre::detail

#endif  // BDRE_SRC_SIM_GRID_HPP_
