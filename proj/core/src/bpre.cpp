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

#include "bdre/bpre.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/distributions/normal.hpp>

#include "bdre/errors.hpp"
#include "bdre/parallel.hpp"
#include "bdre/simulate.hpp"

namespace bdre {

namespace {

// Largest Poisson mean accepted before the next generation could leave
// the int64 range.
constexpr double kPopulationLimit = 9.2e18;

}  // namespace

double BpreConfig::log_mean_offset() const {
  return drift == BpreDrift::kLogMean ? alpha : alpha - 0.5 * sigma_e2;
}

void BpreConfig::validate() const {
  if (n < 1) throw ConfigError("bpre: n must be >= 1");
  if (generations < 1) throw ConfigError("bpre: generations must be >= 1");
  if (!(z0_mass >= 0.0) || !std::isfinite(z0_mass)) {
    throw DomainError("bpre: z0_mass must be finite and >= 0");
  }
  if (!std::isfinite(alpha)) throw DomainError("bpre: alpha must be finite");
  if (!(sigma_e2 >= 0.0) || !std::isfinite(sigma_e2)) {
    throw DomainError("bpre: sigma_e2 must be finite and >= 0");
  }
  if (static_cast<double>(n) * z0_mass >= kPopulationLimit) {
    throw StabilityError("bpre: initial population exceeds 2^63 - 1");
  }
}

BprePath simulate_bpre(const BpreConfig& config, std::uint64_t seed,
                       std::uint64_t replica, std::uint32_t index) {
  config.validate();
  const StreamId base{seed, replica, StreamTag::kEnvironment, index};
  RandomStream env(base);
  RandomStream offspring(base.with(StreamTag::kBranching, index));
  const double nd = static_cast<double>(config.n);
  const double root_n = std::sqrt(nd);
  const double shift = config.log_mean_offset() / nd;
  const double scale = std::sqrt(config.sigma_e2) / root_n;
  const auto g = static_cast<std::size_t>(config.generations);

  BprePath path;
  path.population.reserve(g + 1);
  path.walk.reserve(g + 1);
  path.means.reserve(g);
  std::int64_t z = std::llround(nd * config.z0_mass);
  double walk = 0.0;
  path.population.push_back(z);
  path.walk.push_back(walk);
  for (std::size_t i = 0; i < g; ++i) {
    // The environment is drawn even after extinction so that S does not
    // depend on the population.
    const double log_m = shift + scale * env.normal();
    const double m = std::exp(log_m);
    walk += root_n * log_m;
    if (z > 0) {
      const double mean = static_cast<double>(z) * m;
      if (!(mean < kPopulationLimit)) {
        throw StabilityError("bpre: population exceeds 2^63 - 1");
      }
      z = offspring.poisson(mean);
    }
    path.means.push_back(m);
    path.population.push_back(z);
    path.walk.push_back(walk);
  }
  return path;
}

std::vector<BpreConvergenceRow> convergence_diagnostic(
    const ModelParams& params, double z0,
    const std::vector<std::int64_t>& n_list, double t, std::size_t replicas,
    double dt, std::uint64_t seed, BpreDrift drift) {
  params.validate();
  if (params.sigma_b2 != 1.0) {
    throw DomainError(
        "bpre-converge requires sigma_b2 == 1: Poisson offspring fixes the "
        "branching variance to 1");
  }
  if (params.theta != 0.0) {
    throw DomainError("bpre-converge requires theta == 0");
  }
  if (n_list.empty()) throw ConfigError("bpre-converge: n_list is empty");
  for (std::size_t i = 0; i < n_list.size(); ++i) {
    if (n_list[i] < 1 || (i > 0 && n_list[i] <= n_list[i - 1])) {
      throw ConfigError("bpre-converge: n_list must be positive and increasing");
    }
  }
  if (!(t > 0.0)) throw DomainError("bpre-converge: t must be > 0");
  if (replicas < 100) throw ConfigError("bpre-converge: replicas must be >= 100");

  SimulationConfig cfg;
  cfg.horizon = t;
  cfg.dt = dt;
  cfg.n = replicas;
  cfg.seed = seed;
  const std::vector<double> reference = simulate_bdre(params, z0, cfg).final_z();
  std::size_t alive = 0;
  for (double z : reference) alive += z > 0.0 ? 1 : 0;
  const McEstimate bdre_survival = proportion_estimate(alive, replicas);

  const boost::math::normal_distribution<double> walk_law(
      params.alpha * t, std::sqrt(std::max(params.sigma_e2, 1e-300) * t));
  std::vector<BpreConvergenceRow> rows;
  for (std::size_t i = 0; i < n_list.size(); ++i) {
    BpreConfig bc;
    bc.n = n_list[i];
    bc.generations = std::llround(t * static_cast<double>(bc.n));
    bc.z0_mass = z0;
    bc.alpha = params.alpha;
    bc.sigma_e2 = params.sigma_e2;
    bc.drift = drift;
    std::vector<double> finals(replicas), walks(replicas);
    const double nd = static_cast<double>(bc.n);
    parallel_for(replicas, [&](std::size_t r) {
      const BprePath p =
          simulate_bpre(bc, seed, r, static_cast<std::uint32_t>(i + 1));
      finals[r] = static_cast<double>(p.population.back()) / nd;
      walks[r] = p.walk.back() / std::sqrt(nd);
    });
    BpreConvergenceRow row;
    row.n = bc.n;
    const KsResult ks = ks_two_sample(finals, reference);
    row.ks_distance = ks.statistic;
    row.ks_p_value = ks.p_value;
    std::size_t hits = 0;
    for (double z : finals) hits += z > 0.0 ? 1 : 0;
    row.survival_bpre = proportion_estimate(hits, replicas);
    row.survival_bdre = bdre_survival;
    if (params.sigma_e2 > 0.0) {
      row.walk_ks = ks_one_sample(walks, [&](double x) {
        return boost::math::cdf(walk_law, x);
      });
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace bdre
