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

#ifndef BDRE_SIMULATE_HPP_
#define BDRE_SIMULATE_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "bdre/asymptotics.hpp"
#include "bdre/model.hpp"
#include "bdre/stats.hpp"

namespace bdre {

// 1e-3 * min(1, 1 / (|alpha| + sigma_e2)).
double default_dt(const ModelParams& params);

struct SimulationConfig {
  double horizon = 1.0;
  double dt = 0.0;  // 0 selects default_dt
  std::size_t n = 1000;
  std::uint64_t seed = 0;
  // Stored grid: every record_every-th step plus the final step; 0 keeps
  // only t = 0 and t = horizon.
  std::size_t record_every = 0;
};

struct Trajectory {
  std::vector<double> z;
  std::vector<double> s;
  std::optional<double> absorbed_at;
};

struct TrajectorySet {
  double dt = 0.0;
  double horizon = 0.0;
  std::vector<double> times;
  std::vector<Trajectory> paths;
  std::uint64_t seed = 0;

  std::vector<double> final_z() const;
  std::vector<double> final_s() const;
};

// One full-truncation Euler step of the coupled pair with given standard
// normal draws. The same environment increment enters Z and S.
// Returns the new (unclamped) Z; S is advanced in place.
double bdre_euler_step(const ModelParams& params, double dt, double z,
                       double& s, double normal_env, double normal_branch);

// Euler-Maruyama for the BDRE (with immigration if theta > 0). With
// theta = 0 a step ending at Z <= 0 sets Z to exactly 0 and records the
// absorption time.
TrajectorySet simulate_bdre(const ModelParams& params, double z0,
                            const SimulationConfig& config);

// Z_t = F_{tau(t)} e^{S_t} with F solving dF = theta / sigma_b2 dt +
// sqrt(F) dW on its own uniform clock.
TrajectorySet simulate_via_time_change(const ModelParams& params, double z0,
                                       const SimulationConfig& config);

// Fraction of Euler paths alive at t. Paths stop at absorption.
McEstimate mc_survival(const ModelParams& params, double z0, double t,
                       std::size_t n, std::uint64_t seed, double dt = 0.0);

// Extra drifts of the conditioned pair at Z-bar = z.
struct ConditionedDrift {
  double z_drift = 0.0;  // dt-coefficient of dZ-bar, excluding Z-bar dS-bar
  double s_drift = 0.0;  // dt-coefficient of dS-bar
};
ConditionedDrift conditioned_drift(const ThetaEvaluator& ev, double z);

// Lower clamp used when evaluating vartheta' / vartheta near zero.
inline constexpr double kZFloor = 1e-12;

// Euler-Maruyama of the process conditioned on never going extinct.
TrajectorySet simulate_conditioned(const ThetaEvaluator& ev, double z0,
                                   const SimulationConfig& config);

// Proportions of samples in [edges[k], edges[k+1]).
std::vector<McEstimate> bin_frequencies(const std::vector<double>& samples,
                                        const std::vector<double>& edges);

struct ReweightedResult {
  std::vector<McEstimate> bins;
  McEstimate total;  // g == 1
};

// E[g(Z-bar_t)] for bin indicators g, estimated from unconditioned paths
// weighted by e^{lambda t} vartheta(Z_t) / vartheta(z0).
ReweightedResult reweighted_expectation(const ThetaEvaluator& ev, double z0,
                                        double t,
                                        const std::vector<double>& edges,
                                        std::size_t n, std::uint64_t seed,
                                        double dt = 0.0);

// Per-path vartheta(Z_t) for the martingale identity.
McEstimate theta_martingale(const ThetaEvaluator& ev, double z0, double t,
                            std::size_t n, std::uint64_t seed,
                            double dt = 0.0);

// Scale function of the conditioned Z-bar, normalized so R(1) = 0.
double scale_function(const ThetaEvaluator& ev, double z);

// Density of the scale measure, exp(-int_1^y 2 mu / sigma^2).
double scale_density(const ThetaEvaluator& ev, double y);

struct BoundaryClassification {
  bool r0_is_minus_inf = false;
  bool rinf_finite = false;
  double r_small = 0.0;     // R(1e-6)
  double r_mid = 0.0;       // R(1e3)
  double r_large = 0.0;     // R(1e6)
  double r_huge = 0.0;      // R(1e12)
};
BoundaryClassification boundary_classification(const ThetaEvaluator& ev);

// Stationary law of Z-bar for alpha < -sigma_e2.
double stationary_density(const ModelParams& params, double y);
double stationary_cdf(const ModelParams& params, double y);

}  // namespace bdre

#endif  // BDRE_SIMULATE_HPP_
