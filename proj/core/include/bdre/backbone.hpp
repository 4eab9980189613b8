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

#ifndef BDRE_BACKBONE_HPP_
#define BDRE_BACKBONE_HPP_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "bdre/model.hpp"
#include "bdre/rng.hpp"
#include "bdre/simulate.hpp"
#include "bdre/stats.hpp"

namespace bdre {

// How a Feller excursion dF = sqrt(F) dW is advanced.
enum class ExcursionScheme {
  // Exact transition law: given F_s = x, F_{s+h} is Gamma(N, h/2) with
  // N ~ Poisson(2x / h) (0 when N = 0).
  kExact,
  // Full-truncation Euler with sub-steps min(dt, eps/10) until the path
  // exceeds 10 eps, then dt.
  kEuler,
};

struct Excursion {
  double dt = 0.0;
  std::vector<double> values;  // on the grid k * dt, values[0] = eps
  double t0 = 0.0;             // absorption time, or the horizon if censored
  bool censored = false;
};

// Feller path from eps on [0, horizon], absorbed at 0.
Excursion sample_excursion(double eps, double dt, double horizon,
                           RandomStream& rng,
                           ExcursionScheme scheme = ExcursionScheme::kEuler);

// One exact step of dF = theta dt + sqrt(sigma2 F) dW over time h.
double feller_exact_step(double x, double h, double sigma2, double theta,
                         RandomStream& rng);

struct BackboneOptions {
  double eps = 1e-3;
  bool immigration = true;  // false suppresses the immigration stream
  ExcursionScheme scheme = ExcursionScheme::kExact;
};

// An excursion read on a list of clock times: values[k] is the excursion
// at clock time T_k - birth, or 0 when T_k < birth.
struct ClockedExcursion {
  double birth = 0.0;     // u for immigrants, 0 for initial families
  double position = 0.0;  // y in [0, z] for initial families
  std::vector<double> values;
};

struct PointRealization {
  std::vector<double> clock;  // tau-tilde at the stored grid times
  std::vector<ClockedExcursion> initial_points;
  std::vector<ClockedExcursion> immigration_points;
};

struct BackboneReplica {
  std::vector<double> s_tilde;  // S-tilde at the stored grid times
  PointRealization points;
};

// One replica of the construction on the grid implied by `config`.
BackboneReplica backbone_replica(const ModelParams& params, double z0,
                                 const SimulationConfig& config,
                                 const BackboneOptions& options,
                                 std::size_t replica);

// Z-tilde at the stored grid times from a stored realization.
std::vector<double> assemble_backbone(const BackboneReplica& replica);

struct BackboneReplicaReport {
  std::size_t initial_families = 0;
  std::size_t immigrant_families = 0;
  bool violated = false;  // Z-tilde hit 0 at some grid time t > 0
};

struct BackboneResult {
  TrajectorySet trajectories;  // s holds S-tilde
  std::vector<BackboneReplicaReport> reports;
  double violation_rate = 0.0;
};

// Family decomposition of the conditioned process for alpha <= -sigma_e2:
// Z-tilde_t = e^{S-tilde_t} (sum of initial and immigrant excursions read
// on the tau-tilde clock).
BackboneResult backbone_simulate(const ModelParams& params, double z0,
                                 const SimulationConfig& config,
                                 const BackboneOptions& options = {});

struct FellerCheckReport {
  std::vector<double> direct;     // Euler of dF = theta dt + sqrt(sb2 F) dW
  std::vector<double> excursion;  // Poisson excursion-sum construction
  KsResult ks;
  McEstimate direct_mean;
  McEstimate excursion_mean;
};

FellerCheckReport feller_immigration_check(double theta, double x0,
                                           double sigma_b2, double horizon,
                                           double dt, double eps,
                                           std::size_t n, std::uint64_t seed);

}  // namespace bdre

#endif  // BDRE_BACKBONE_HPP_
