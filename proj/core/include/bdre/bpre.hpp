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

#ifndef BDRE_BPRE_HPP_
#define BDRE_BPRE_HPP_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "bdre/model.hpp"
#include "bdre/rng.hpp"
#include "bdre/stats.hpp"

namespace bdre {

// Offset a in the log-mean a/n + sigma_e G / sqrt(n) of the Poisson
// offspring law.
enum class BpreDrift {
  // a = alpha: the associated random walk converges to the environment
  // S_t = alpha t + sigma_e W_t and n E[m - 1] -> alpha + sigma_e2 / 2.
  kLogMean,
  // a = alpha - sigma_e2 / 2: n E[m - 1] -> alpha.
  kMeanOffspring,
};

struct BpreConfig {
  std::int64_t n = 100;
  std::int64_t generations = 100;
  double z0_mass = 1.0;  // initial individuals = round(n * z0_mass)
  double alpha = 0.0;
  double sigma_e2 = 1.0;
  BpreDrift drift = BpreDrift::kLogMean;

  double log_mean_offset() const;
  void validate() const;
};

struct BprePath {
  std::vector<std::int64_t> population;  // Z_0 .. Z_generations
  // sqrt(n) * sum_{i<k} log m_i, so that walk[k] / sqrt(n) ~ S_{k/n}.
  std::vector<double> walk;
  std::vector<double> means;  // m_0 .. m_{generations-1}
};

// Streams: environment draws on (replica, kEnvironment, index), offspring
// on (replica, kBranching, index).
BprePath simulate_bpre(const BpreConfig& config, std::uint64_t seed,
                       std::uint64_t replica = 0, std::uint32_t index = 0);

struct BpreConvergenceRow {
  std::int64_t n = 0;
  double ks_distance = 0.0;
  double ks_p_value = 0.0;
  McEstimate survival_bpre;
  McEstimate survival_bdre;
  KsResult walk_ks;  // walk / sqrt(n) at generation tn vs N(alpha t, sigma_e2 t)
};

// One-time marginal comparison of Z^{(n)}_{tn} / n with the Euler BDRE
// marginal at time t. Requires sigma_b2 == 1.
std::vector<BpreConvergenceRow> convergence_diagnostic(
    const ModelParams& params, double z0, const std::vector<std::int64_t>& n_list,
    double t, std::size_t replicas, double dt, std::uint64_t seed,
    BpreDrift drift = BpreDrift::kLogMean);

}  // namespace bdre

#endif  // BDRE_BPRE_HPP_
