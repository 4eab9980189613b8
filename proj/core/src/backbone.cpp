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

#include "bdre/backbone.hpp"

#include <algorithm>
#include <cmath>

#include "bdre/env_path.hpp"
#include "bdre/errors.hpp"
#include "bdre/parallel.hpp"
#include "sim_grid.hpp"

namespace bdre {

namespace {

constexpr std::uint32_t kMaxFamilies = (1u << 28) - 1;

void check_eps(double eps) {
  if (!(eps > 0.0) || !std::isfinite(eps)) {
    throw DomainError("eps must be finite and > 0");
  }
}

// Walks dF = sqrt(F) dW from eps with the mixed-step Euler scheme and reads
// it off at increasing times by linear interpolation.
class EulerWalker {
 public:
  EulerWalker(double eps, double dt, RandomStream& rng)
      : eps_(eps), dt_(dt), fine_(std::min(dt, eps / 10.0)), rng_(rng),
        cur_(eps), prev_(eps) {}

  double value_at(double t) {
    while (!dead_ && time_ < t) step(t);
    if (dead_ && t >= dead_time_) return 0.0;
    if (time_ == 0.0 || time_ <= t) return cur_;
    const double w = (time_ - t) / last_h_;
    return std::max(w * prev_ + (1.0 - w) * cur_, 0.0);
  }

  bool dead() const { return dead_; }
  double dead_time() const { return dead_time_; }

 private:
  // Steps never cross the next read-off time.
  void step(double until) {
    double h = cur_ < 10.0 * eps_ ? fine_ : dt_;
    const bool last = h >= until - time_;
    if (last) h = until - time_;
    prev_ = cur_;
    cur_ = prev_ + std::sqrt(prev_ * h) * rng_.normal();
    time_ = last ? until : time_ + h;
    last_h_ = h;
    if (cur_ <= 0.0) {
      cur_ = 0.0;
      dead_ = true;
      dead_time_ = time_;
    }
  }

  double eps_, dt_, fine_;
  RandomStream& rng_;
  double cur_, prev_;
  double time_ = 0.0;
  double last_h_ = 1.0;
  bool dead_ = false;
  double dead_time_ = INFINITY;
};

// Values of an excursion born at `birth` at the clock times `clock`.
std::vector<double> clocked_values(double eps, double birth,
                                   const std::vector<double>& clock,
                                   double sigma2, double euler_dt,
                                   ExcursionScheme scheme, RandomStream& rng) {
  std::vector<double> out(clock.size(), 0.0);
  if (scheme == ExcursionScheme::kExact) {
    double x = eps;
    double last = birth;
    for (std::size_t k = 0; k < clock.size(); ++k) {
      if (clock[k] < birth) continue;
      if (clock[k] > last) {
        x = feller_exact_step(x, clock[k] - last, sigma2, 0.0, rng);
        last = clock[k];
      }
      out[k] = x;
      if (x == 0.0) break;
    }
  } else {
    // Time scaled so that the walker sees unit variance.
    EulerWalker walker(eps, euler_dt, rng);
    for (std::size_t k = 0; k < clock.size(); ++k) {
      if (clock[k] < birth) continue;
      out[k] = walker.value_at(sigma2 * (clock[k] - birth));
      if (out[k] == 0.0 && walker.dead()) break;
    }
  }
  return out;
}

std::uint32_t family_index(std::size_t j) {
  if (j > kMaxFamilies) {
    throw ConfigError("too many excursion families for the stream layout");
  }
  return static_cast<std::uint32_t>(j);
}

}  // namespace

double feller_exact_step(double x, double h, double sigma2, double theta,
                         RandomStream& rng) {
  if (h <= 0.0) return x;
  const double c = 0.5 * sigma2 * h;
  const double n = x > 0.0 ? static_cast<double>(rng.poisson(x / c)) : 0.0;
  const double shape = n + 2.0 * theta / sigma2;
  if (shape <= 0.0) return 0.0;
  return c * rng.gamma(shape);
}

Excursion sample_excursion(double eps, double dt, double horizon,
                           RandomStream& rng, ExcursionScheme scheme) {
  check_eps(eps);
  const std::size_t steps = step_count(horizon, dt);
  Excursion ex;
  ex.dt = dt;
  ex.values.assign(steps + 1, 0.0);
  ex.values[0] = eps;
  ex.t0 = horizon;
  ex.censored = true;
  if (scheme == ExcursionScheme::kExact) {
    double x = eps;
    for (std::size_t k = 0; k < steps; ++k) {
      const double next = feller_exact_step(x, dt, 1.0, 0.0, rng);
      if (next == 0.0) {
        // Hitting time given F_t = x and F_{t+dt} = 0:
        // P(T0 - t <= s) = exp(-2x/s) / exp(-2x/dt).
        const double u = rng.uniform();
        const double s = 2.0 * x / (2.0 * x / dt - std::log(u));
        ex.t0 = dt * static_cast<double>(k) + s;
        ex.censored = false;
        break;
      }
      x = next;
      ex.values[k + 1] = x;
    }
  } else {
    EulerWalker walker(eps, dt, rng);
    for (std::size_t k = 1; k <= steps; ++k) {
      ex.values[k] = walker.value_at(dt * static_cast<double>(k));
      if (walker.dead()) {
        ex.values[k] = 0.0;
        ex.t0 = walker.dead_time();
        ex.censored = false;
        break;
      }
    }
  }
  return ex;
}

BackboneReplica backbone_replica(const ModelParams& params, double z0,
                                 const SimulationConfig& config,
                                 const BackboneOptions& options,
                                 std::size_t replica) {
  params.validate();
  check_eps(options.eps);
  if (!(params.alpha <= -params.sigma_e2)) {
    throw DomainError(
        "backbone construction requires alpha <= -sigma_e2 "
        "(strongly or intermediately subcritical)");
  }
  if (!(z0 > 0.0)) throw DomainError("initial mass must be > 0");
  const double dt = detail::resolve_dt(params, config.dt);
  detail::check_config(params, z0, config, dt);
  const std::size_t steps = step_count(config.horizon, dt);
  const auto idx = detail::record_indices(steps, config.record_every);

  RandomStream env(
      detail::replica_stream(config.seed, replica, StreamTag::kEnvironment));
  const EnvPath path = sample_drifted_path(params.alpha + params.sigma_e2,
                                           params.sigma_e2, config.horizon,
                                           dt, env);
  const TimeChangeGrid tau = time_change(path, params.sigma_b2);

  BackboneReplica out;
  PointRealization& pts = out.points;
  for (std::size_t k : idx) {
    out.s_tilde.push_back(path.values[k]);
    pts.clock.push_back(tau.tau_values[k]);
  }
  // tau-tilde already carries sigma_b2, so excursions run at unit variance.
  const double total_clock = pts.clock.back();

  RandomStream imm(
      detail::replica_stream(config.seed, replica, StreamTag::kImmigration));
  const auto n0 = static_cast<std::size_t>(imm.poisson(z0 / options.eps));
  const auto n1 =
      options.immigration
          ? static_cast<std::size_t>(imm.poisson(total_clock / options.eps))
          : std::size_t{0};
  pts.initial_points.resize(n0);
  for (auto& p : pts.initial_points) p.position = z0 * imm.uniform();
  std::vector<double> births(n1);
  for (double& u : births) u = total_clock * imm.uniform();
  std::sort(births.begin(), births.end());
  pts.immigration_points.resize(n1);
  for (std::size_t i = 0; i < n1; ++i) pts.immigration_points[i].birth = births[i];

  const StreamId base =
      detail::replica_stream(config.seed, replica, StreamTag::kFamily);
  std::size_t j = 0;
  auto fill = [&](ClockedExcursion& e) {
    RandomStream rng(base.with(StreamTag::kFamily, family_index(j++)));
    e.values = clocked_values(options.eps, e.birth, pts.clock, 1.0, dt,
                              options.scheme, rng);
  };
  for (auto& e : pts.initial_points) fill(e);
  for (auto& e : pts.immigration_points) fill(e);
  return out;
}

std::vector<double> assemble_backbone(const BackboneReplica& replica) {
  const std::size_t m = replica.s_tilde.size();
  std::vector<double> f(m, 0.0);
  for (const auto& e : replica.points.initial_points) {
    for (std::size_t k = 0; k < m; ++k) f[k] += e.values[k];
  }
  for (const auto& e : replica.points.immigration_points) {
    for (std::size_t k = 0; k < m; ++k) f[k] += e.values[k];
  }
  for (std::size_t k = 0; k < m; ++k) f[k] *= std::exp(replica.s_tilde[k]);
  return f;
}

BackboneResult backbone_simulate(const ModelParams& params, double z0,
                                 const SimulationConfig& config,
                                 const BackboneOptions& options) {
  const double dt = detail::resolve_dt(params, config.dt);
  // Validates everything up front so workers only see sampling failures.
  (void)backbone_replica(params, z0,
                         SimulationConfig{config.horizon, dt, 1,
                                          config.seed, config.record_every},
                         BackboneOptions{options.eps, false, options.scheme},
                         0);
  const std::size_t steps = step_count(config.horizon, dt);
  const auto idx = detail::record_indices(steps, config.record_every);
  BackboneResult result;
  result.trajectories = detail::make_set(dt, steps, idx, config);
  result.reports.resize(config.n);
  SimulationConfig cfg = config;
  cfg.dt = dt;
  parallel_for(config.n, [&](std::size_t r) {
    const BackboneReplica rep = backbone_replica(params, z0, cfg, options, r);
    Trajectory& path = result.trajectories.paths[r];
    path.z = assemble_backbone(rep);
    path.s = rep.s_tilde;
    BackboneReplicaReport& report = result.reports[r];
    report.initial_families = rep.points.initial_points.size();
    report.immigrant_families = rep.points.immigration_points.size();
    report.violated = std::any_of(path.z.begin() + 1, path.z.end(),
                                  [](double z) { return z <= 0.0; });
  });
  std::size_t violations = 0;
  for (const auto& r : result.reports) violations += r.violated ? 1 : 0;
  result.violation_rate = config.n > 0 ? static_cast<double>(violations) /
                                             static_cast<double>(config.n)
                                       : 0.0;
  return result;
}

FellerCheckReport feller_immigration_check(double theta, double x0,
                                           double sigma_b2, double horizon,
                                           double dt, double eps,
                                           std::size_t n, std::uint64_t seed) {
  if (!(theta >= 0.0) || !(x0 >= 0.0) || !std::isfinite(theta) ||
      !std::isfinite(x0)) {
    throw DomainError("theta and x0 must be finite and >= 0");
  }
  if (!(sigma_b2 > 0.0)) throw DomainError("sigma_b2 must be > 0");
  check_eps(eps);
  if (n < 2) throw ConfigError("need at least 2 samples per construction");
  const std::size_t steps = step_count(horizon, dt);

  FellerCheckReport rep;
  rep.direct.assign(n, 0.0);
  rep.excursion.assign(n, 0.0);
  parallel_for(n, [&](std::size_t r) {
    RandomStream br(detail::replica_stream(seed, r, StreamTag::kBranching));
    double f = x0;
    for (std::size_t k = 0; k < steps; ++k) {
      if (f == 0.0 && theta == 0.0) break;
      f += theta * dt + std::sqrt(sigma_b2 * f * dt) * br.normal();
      f = std::max(f, 0.0);
    }
    rep.direct[r] = f;

    RandomStream imm(detail::replica_stream(seed, r, StreamTag::kImmigration));
    const auto n0 = static_cast<std::size_t>(imm.poisson(x0 / eps));
    const auto n1 =
        static_cast<std::size_t>(imm.poisson(theta * horizon / eps));
    const StreamId base =
        detail::replica_stream(seed, r, StreamTag::kFamily);
    double sum = 0.0;
    for (std::size_t j = 0; j < n0 + n1; ++j) {
      const double birth = j < n0 ? 0.0 : horizon * imm.uniform();
      RandomStream rng(base.with(StreamTag::kFamily, family_index(j)));
      sum += feller_exact_step(eps, horizon - birth, sigma_b2, 0.0, rng);
    }
    rep.excursion[r] = sum;
  });
  rep.ks = ks_two_sample(rep.direct, rep.excursion);
  rep.direct_mean = mc_estimate(rep.direct);
  rep.excursion_mean = mc_estimate(rep.excursion);
  return rep;
}

}  // namespace bdre
