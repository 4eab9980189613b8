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

#include "bdre/simulate.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "bdre/env_path.hpp"
#include "bdre/errors.hpp"
#include "bdre/parallel.hpp"
#include "bdre/quadrature.hpp"
#include "bdre/rng.hpp"
#include "sim_grid.hpp"

namespace bdre {

using detail::check_config;
using detail::make_set;
using detail::record_indices;
using detail::replica_stream;
using detail::resolve_dt;

namespace {

// Runs the plain Euler scheme to `steps`, stopping early at absorption when
// `stop_at_zero` is set. Returns the final Z (0 if absorbed).
double run_bdre_path(const ModelParams& params, double z0, double dt,
                     std::size_t steps, std::uint64_t seed,
                     std::size_t replica, bool stop_at_zero,
                     double* s_out = nullptr) {
  RandomStream env(replica_stream(seed, replica, StreamTag::kEnvironment));
  RandomStream branch(replica_stream(seed, replica, StreamTag::kBranching));
  const bool absorbing = params.theta == 0.0;
  double z = z0;
  double s = 0.0;
  if (absorbing && z <= 0.0) {
    if (s_out) *s_out = 0.0;
    return 0.0;
  }
  for (std::size_t k = 0; k < steps; ++k) {
    const double ne = env.normal();
    const double nb = branch.normal();
    z = bdre_euler_step(params, dt, z, s, ne, nb);
    if (absorbing && z <= 0.0) {
      z = 0.0;
      if (stop_at_zero) break;
    }
  }
  if (s_out) *s_out = s;
  return std::max(z, 0.0);
}

}  // namespace

double default_dt(const ModelParams& params) {
  return 1e-3 * std::min(1.0, 1.0 / (std::abs(params.alpha) + params.sigma_e2));
}

std::vector<double> TrajectorySet::final_z() const {
  std::vector<double> out;
  out.reserve(paths.size());
  for (const auto& p : paths) out.push_back(p.z.back());
  return out;
}

std::vector<double> TrajectorySet::final_s() const {
  std::vector<double> out;
  out.reserve(paths.size());
  for (const auto& p : paths) out.push_back(p.s.back());
  return out;
}

double bdre_euler_step(const ModelParams& params, double dt, double z,
                       double& s, double normal_env, double normal_branch) {
  const double zp = std::max(z, 0.0);
  const double ds =
      params.alpha * dt + std::sqrt(params.sigma_e2 * dt) * normal_env;
  s += ds;
  return z + (params.theta + 0.5 * params.sigma_e2 * zp) * dt + zp * ds +
         std::sqrt(params.sigma_b2 * zp * dt) * normal_branch;
}

TrajectorySet simulate_bdre(const ModelParams& params, double z0,
                            const SimulationConfig& config) {
  const double dt = resolve_dt(params, config.dt);
  check_config(params, z0, config, dt);
  const std::size_t steps = step_count(config.horizon, dt);
  const auto idx = record_indices(steps, config.record_every);
  TrajectorySet set = make_set(dt, steps, idx, config);
  const bool absorbing = params.theta == 0.0;
  parallel_for(config.n, [&](std::size_t r) {
    RandomStream env(replica_stream(config.seed, r, StreamTag::kEnvironment));
    RandomStream branch(replica_stream(config.seed, r, StreamTag::kBranching));
    Trajectory& path = set.paths[r];
    path.z.reserve(idx.size());
    path.s.reserve(idx.size());
    double z = z0;
    double s = 0.0;
    bool dead = absorbing && z0 == 0.0;
    if (dead) path.absorbed_at = 0.0;
    std::size_t next = 0;
    for (std::size_t k = 0;; ++k) {
      if (next < idx.size() && idx[next] == k) {
        path.z.push_back(dead ? 0.0 : std::max(z, 0.0));
        path.s.push_back(s);
        ++next;
      }
      if (k == steps) break;
      const double ne = env.normal();
      const double nb = branch.normal();
      if (dead) {
        s += params.alpha * dt + std::sqrt(params.sigma_e2 * dt) * ne;
        continue;
      }
      z = bdre_euler_step(params, dt, z, s, ne, nb);
      if (absorbing && z <= 0.0) {
        z = 0.0;
        dead = true;
        path.absorbed_at = dt * static_cast<double>(k + 1);
      }
    }
  });
  return set;
}

TrajectorySet simulate_via_time_change(const ModelParams& params, double z0,
                                       const SimulationConfig& config) {
  const double dt = resolve_dt(params, config.dt);
  check_config(params, z0, config, dt);
  const std::size_t steps = step_count(config.horizon, dt);
  const auto idx = record_indices(steps, config.record_every);
  TrajectorySet set = make_set(dt, steps, idx, config);
  const bool absorbing = params.theta == 0.0;
  const double h = params.sigma_b2 * dt;  // step of the F-clock
  const double f_drift = params.theta / params.sigma_b2;
  parallel_for(config.n, [&](std::size_t r) {
    RandomStream env(replica_stream(config.seed, r, StreamTag::kEnvironment));
    RandomStream branch(replica_stream(config.seed, r, StreamTag::kBranching));
    const EnvPath path = sample_env_path(params, config.horizon, dt, env);
    const TimeChangeGrid tau = time_change(path, params.sigma_b2);
    Trajectory& out = set.paths[r];
    out.z.reserve(idx.size());
    out.s.reserve(idx.size());
    // F on its own clock, read off at tau(t_k) by linear interpolation.
    double f_prev = z0, f_cur = z0;
    double clock = 0.0;
    bool dead = absorbing && z0 == 0.0;
    double dead_clock = dead ? 0.0 : INFINITY;
    for (std::size_t k : idx) {
      const double target = tau.tau_values[k];
      while (!dead && clock < target) {
        f_prev = f_cur;
        f_cur = f_prev + f_drift * h +
                std::sqrt(std::max(f_prev, 0.0) * h) * branch.normal();
        clock += h;
        if (absorbing && f_cur <= 0.0) {
          f_cur = 0.0;
          dead = true;
          dead_clock = clock;
        }
      }
      double f;
      if (dead && target >= dead_clock) {
        f = 0.0;
      } else if (clock == 0.0 || clock <= target) {
        f = f_cur;
      } else {
        const double w = (clock - target) / h;
        f = w * f_prev + (1.0 - w) * f_cur;
      }
      out.z.push_back(std::max(f, 0.0) * std::exp(path.values[k]));
      out.s.push_back(path.values[k]);
    }
    if (dead) {
      const auto it = std::lower_bound(tau.tau_values.begin(),
                                       tau.tau_values.end(), dead_clock);
      if (it != tau.tau_values.end()) {
        out.absorbed_at =
            dt * static_cast<double>(it - tau.tau_values.begin());
      }
    }
  });
  return set;
}

McEstimate mc_survival(const ModelParams& params, double z0, double t,
                       std::size_t n, std::uint64_t seed, double dt) {
  if (n < 100) {
    throw DomainError("mc_survival: n < 100 gives a useless standard error");
  }
  dt = resolve_dt(params, dt);
  SimulationConfig cfg;
  cfg.horizon = t;
  cfg.n = n;
  check_config(params, z0, cfg, dt);
  const std::size_t steps = step_count(t, dt);
  std::vector<unsigned char> alive(n, 0);
  parallel_for(n, [&](std::size_t r) {
    alive[r] = run_bdre_path(params, z0, dt, steps, seed, r, true) > 0.0;
  });
  std::size_t hits = 0;
  for (unsigned char a : alive) hits += a;
  return proportion_estimate(hits, n);
}

ConditionedDrift conditioned_drift(const ThetaEvaluator& ev, double z) {
  const ModelParams& p = ev.params();
  const double rho = ev.log_slope_fast(std::max(z, kZFloor));
  const double zp = std::max(z, 0.0);
  return ConditionedDrift{p.sigma_b2 * rho + 0.5 * p.sigma_e2 * zp,
                          p.alpha + p.sigma_e2 * rho};
}

TrajectorySet simulate_conditioned(const ThetaEvaluator& ev, double z0,
                                   const SimulationConfig& config) {
  const ModelParams& params = ev.params();
  if (!(z0 > 0.0)) {
    throw DomainError(
        "simulate_conditioned: z0 must be > 0 (conditioning undefined at 0)");
  }
  if (params.theta != 0.0) {
    throw DomainError("simulate_conditioned: requires theta = 0");
  }
  const double dt = resolve_dt(params, config.dt);
  check_config(params, z0, config, dt);
  const std::size_t steps = step_count(config.horizon, dt);
  const auto idx = record_indices(steps, config.record_every);
  TrajectorySet set = make_set(dt, steps, idx, config);
  const double sq_e = std::sqrt(params.sigma_e2 * dt);
  const double sq_b = std::sqrt(params.sigma_b2 * dt);
  parallel_for(config.n, [&](std::size_t r) {
    RandomStream env(replica_stream(config.seed, r, StreamTag::kEnvironment));
    RandomStream branch(replica_stream(config.seed, r, StreamTag::kBranching));
    Trajectory& path = set.paths[r];
    path.z.reserve(idx.size());
    path.s.reserve(idx.size());
    double z = z0;
    double s = 0.0;
    std::size_t next = 0;
    for (std::size_t k = 0;; ++k) {
      if (next < idx.size() && idx[next] == k) {
        path.z.push_back(std::max(z, 0.0));
        path.s.push_back(s);
        ++next;
      }
      if (k == steps) break;
      const ConditionedDrift d = conditioned_drift(ev, z);
      const double zp = std::max(z, 0.0);
      const double ds = d.s_drift * dt + sq_e * env.normal();
      s += ds;
      z += d.z_drift * dt + zp * ds + sq_b * std::sqrt(zp) * branch.normal();
    }
  });
  return set;
}

std::vector<McEstimate> bin_frequencies(const std::vector<double>& samples,
                                        const std::vector<double>& edges) {
  if (edges.size() < 2) throw DomainError("bins need at least two edges");
  std::vector<std::size_t> counts(edges.size() - 1, 0);
  for (double x : samples) {
    const auto it = std::upper_bound(edges.begin(), edges.end(), x);
    if (it == edges.begin() || it == edges.end()) continue;
    ++counts[static_cast<std::size_t>(it - edges.begin()) - 1];
  }
  std::vector<McEstimate> out;
  for (std::size_t c : counts) {
    out.push_back(proportion_estimate(c, samples.size()));
  }
  return out;
}

namespace {

std::vector<double> unconditioned_finals(const ModelParams& params, double z0,
                                         double t, std::size_t n,
                                         std::uint64_t seed, double dt) {
  dt = resolve_dt(params, dt);
  SimulationConfig cfg;
  cfg.horizon = t;
  cfg.n = n;
  check_config(params, z0, cfg, dt);
  const std::size_t steps = step_count(t, dt);
  std::vector<double> finals(n, 0.0);
  parallel_for(n, [&](std::size_t r) {
    finals[r] = run_bdre_path(params, z0, dt, steps, seed, r, true);
  });
  return finals;
}

}  // namespace

ReweightedResult reweighted_expectation(const ThetaEvaluator& ev, double z0,
                                        double t,
                                        const std::vector<double>& edges,
                                        std::size_t n, std::uint64_t seed,
                                        double dt) {
  if (!(z0 > 0.0)) throw DomainError("reweighted_expectation: z0 must be > 0");
  if (edges.size() < 2) throw DomainError("bins need at least two edges");
  const ModelParams& params = ev.params();
  const double step = resolve_dt(params, dt);
  const std::vector<double> finals =
      unconditioned_finals(params, z0, t, n, seed, step);
  const double scale =
      std::exp(ev.lambda() * step * static_cast<double>(step_count(t, step))) /
      ev.vartheta(z0);
  std::vector<double> weights(n);
  parallel_for(n, [&](std::size_t r) {
    weights[r] = finals[r] > 0.0 ? scale * ev.vartheta(finals[r]) : 0.0;
  });
  ReweightedResult res;
  res.total = mc_estimate(weights);
  std::vector<double> column(n);
  for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
    for (std::size_t r = 0; r < n; ++r) {
      const double z = finals[r];
      column[r] = (z > 0.0 && z >= edges[k] && z < edges[k + 1]) ? weights[r]
                                                                  : 0.0;
    }
    res.bins.push_back(mc_estimate(column));
  }
  return res;
}

McEstimate theta_martingale(const ThetaEvaluator& ev, double z0, double t,
                            std::size_t n, std::uint64_t seed, double dt) {
  const std::vector<double> finals =
      unconditioned_finals(ev.params(), z0, t, n, seed, dt);
  std::vector<double> values(n);
  parallel_for(n, [&](std::size_t r) {
    values[r] = finals[r] > 0.0 ? ev.vartheta(finals[r]) : 0.0;
  });
  return mc_estimate(values);
}

double scale_density(const ThetaEvaluator& ev, double y) {
  if (!(y > 0.0)) throw DomainError("scale function: z must be > 0");
  const ModelParams& p = ev.params();
  // int_1^y 2 mu / sigma^2 = 2 log(vartheta(y) / vartheta(1))
  //   + (sigma_e2 + 2 alpha) / sigma_e2 log((sb2 + se2 y) / (sb2 + se2)).
  const double log_ratio = std::log(ev.vartheta(y) / ev.vartheta(1.0));
  const double k = (p.sigma_e2 + 2.0 * p.alpha) / p.sigma_e2;
  const double log_lin = std::log((p.sigma_b2 + p.sigma_e2 * y) /
                                  (p.sigma_b2 + p.sigma_e2));
  return std::exp(-2.0 * log_ratio - k * log_lin);
}

double scale_function(const ThetaEvaluator& ev, double z) {
  if (!(z > 0.0)) throw DomainError("scale function: z must be > 0");
  if (z == 1.0) return 0.0;
  // R(z) = int_0^{log z} s(e^u) e^u du.
  auto g = [&ev](double u) {
    const double y = std::exp(u);
    return scale_density(ev, y) * y;
  };
  const double upper = std::log(z);
  double err = 0.0;
  double l1 = 0.0;
  using Gk = boost::math::quadrature::gauss_kronrod<double, 31>;
  const double lo = std::min(0.0, upper), hi = std::max(0.0, upper);
  const double v = Gk::integrate(g, lo, hi, 20, 1e-10, &err, &l1);
  if (!std::isfinite(v) || err > 1e-6 * std::max(1.0, l1)) {
    throw AccuracyError("scale function quadrature failed");
  }
  return upper > 0.0 ? v : -v;
}

BoundaryClassification boundary_classification(const ThetaEvaluator& ev) {
  BoundaryClassification b;
  b.r_small = scale_function(ev, 1e-6);
  b.r_mid = scale_function(ev, 1e3);
  b.r_large = scale_function(ev, 1e6);
  b.r_huge = scale_function(ev, 1e12);
  b.r0_is_minus_inf = b.r_small < -1e3;
  // Increments over [1e3, 1e6] and [1e6, 1e12] cover equal ranges of
  // log log z. A convergent tail (down to the borderline 1 / (y log^2 y))
  // at least halves them; a divergent one keeps or grows them.
  const double first = b.r_large - b.r_mid;
  const double second = b.r_huge - b.r_large;
  b.rinf_finite = second < 0.75 * first;
  return b;
}

namespace {

void require_strong(const ModelParams& params) {
  params.validate();
  if (!(params.sigma_e2 > 0.0) || !(params.alpha < -params.sigma_e2)) {
    throw DomainError(
        "stationary_density: requires alpha < -sigma_e2 (no stationary law "
        "otherwise)");
  }
}

double unnormalized_stationary(const ModelParams& p, double y) {
  return y * std::pow(p.sigma_b2 + p.sigma_e2 * y, 2.0 * p.alpha / p.sigma_e2);
}

double stationary_mass(const ModelParams& p, double upper) {
  QuadratureSettings q;
  q.rel_tol = 1e-12;
  Integrand f = [&p](double y) { return unnormalized_stationary(p, y); };
  if (std::isinf(upper)) return integrate_to_infinity(f, 0.0, q).value;
  return integrate_interval(f, 0.0, upper, q).value;
}

}  // namespace

double stationary_density(const ModelParams& params, double y) {
  require_strong(params);
  if (!(y > 0.0)) return 0.0;
  return unnormalized_stationary(params, y) / stationary_mass(params, INFINITY);
}

double stationary_cdf(const ModelParams& params, double y) {
  require_strong(params);
  if (!(y > 0.0)) return 0.0;
  return std::min(1.0, stationary_mass(params, y) /
                           stationary_mass(params, INFINITY));
}

}  // namespace bdre
