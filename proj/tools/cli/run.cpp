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

#include "cli/run.hpp"

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <variant>
#include <vector>

#include <fmt/format.h>
#include <unistd.h>

#include "bdre/asymptotics.hpp"
#include "bdre/backbone.hpp"
#include "bdre/bpre.hpp"
#include "bdre/errors.hpp"
#include "bdre/exact.hpp"
#include "bdre/simulate.hpp"
#include "bdre/stats.hpp"

namespace bdre::cli {

namespace {

using nlohmann::json;
using Cell = std::variant<double, std::int64_t, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

struct Output {
  Table table;
  json summary = json::object();
};

// Seed offset for the independent reference sample of `backbone`.
constexpr std::uint64_t kReferenceSeedMix = 0x5bd1e9955bd1e995ULL;

std::string cell_text(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) return fmt::format("{:.17g}", *d);
  if (const auto* i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
  return std::get<std::string>(c);
}

json cell_json(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) {
    return std::isfinite(*d) ? json(*d) : json(nullptr);
  }
  if (const auto* i = std::get_if<std::int64_t>(&c)) return json(*i);
  return json(std::get<std::string>(c));
}

double need(const std::optional<double>& x, const char* flag,
            const ExperimentConfig& c) {
  if (!x) {
    throw ConfigError(fmt::format("{} requires --{}", command_name(c.command),
                                  flag));
  }
  return *x;
}

std::uint64_t seed_of(const ExperimentConfig& c) {
  if (!c.seed) {
    throw ConfigError(fmt::format(
        "{} consumes randomness and requires --seed", command_name(c.command)));
  }
  return *c.seed;
}

SimulationConfig sim_config(const ExperimentConfig& c, double horizon,
                            std::size_t default_n) {
  SimulationConfig s;
  s.horizon = horizon;
  s.dt = c.dt.value_or(0.0);
  s.n = c.n.value_or(default_n);
  s.seed = seed_of(c);
  s.record_every = c.record_every;
  return s;
}

Table path_table(const TrajectorySet& set) {
  Table t;
  t.columns = {"replica", "t", "z", "s"};
  for (std::size_t r = 0; r < set.paths.size(); ++r) {
    const Trajectory& p = set.paths[r];
    for (std::size_t k = 0; k < set.times.size(); ++k) {
      t.rows.push_back({static_cast<std::int64_t>(r), set.times[k], p.z[k],
                        p.s[k]});
    }
  }
  return t;
}

json path_summary(const TrajectorySet& set) {
  std::size_t absorbed = 0, alive = 0;
  for (const auto& p : set.paths) {
    absorbed += p.absorbed_at ? 1 : 0;
    alive += p.z.back() > 0.0 ? 1 : 0;
  }
  json s;
  s["seed"] = set.seed;
  if (set.paths.size() >= 2) {
    const McEstimate surv = proportion_estimate(alive, set.paths.size());
    s["survival"] = surv.mean;
    s["survival_se"] = surv.std_error;
  }
  s["dt"] = set.dt;
  s["horizon"] = set.horizon;
  s["paths"] = set.paths.size();
  s["absorbed_fraction"] =
      set.paths.empty() ? 0.0
                        : static_cast<double>(absorbed) /
                              static_cast<double>(set.paths.size());
  return s;
}

Output cmd_survival(const ExperimentConfig& c) {
  const double t = need(c.t, "t", c);
  const double z0 = c.z0.value_or(1.0);
  const SurvivalResult exact = survival_exact_detail(c.params, z0, t);
  Output out;
  out.table.columns = {"regime", "t", "z0", "value", "error", "method"};
  std::vector<Cell> row{std::string(regime_name(classify_regime(c.params))),
                        t, z0, exact.value, exact.error, exact.method};
  if (consumes_randomness(c)) {
    const McEstimate mc =
        mc_survival(c.params, z0, t, *c.n, seed_of(c), c.dt.value_or(0.0));
    out.table.columns.insert(out.table.columns.end(),
                             {"mc_mean", "mc_se", "n"});
    row.insert(row.end(), {mc.mean, mc.std_error,
                           static_cast<std::int64_t>(mc.n)});
  }
  out.table.rows.push_back(std::move(row));
  return out;
}

Output cmd_simulate(const ExperimentConfig& c) {
  const double t = need(c.t, "t", c);
  const SimulationConfig s = sim_config(c, t, 100);
  const double z0 = c.z0.value_or(1.0);
  TrajectorySet set;
  if (c.method == "euler") {
    set = simulate_bdre(c.params, z0, s);
  } else if (c.method == "time-change") {
    set = simulate_via_time_change(c.params, z0, s);
  } else {
    throw ConfigError("simulate: --method must be euler or time-change");
  }
  return Output{path_table(set), path_summary(set)};
}

Output cmd_condition(const ExperimentConfig& c) {
  const double t = need(c.t, "t", c);
  const SimulationConfig s = sim_config(c, t, 100);
  const ThetaEvaluator ev(c.params);
  const TrajectorySet set = simulate_conditioned(ev, c.z0.value_or(1.0), s);
  Output out{path_table(set), path_summary(set)};
  out.summary["regime"] = std::string(regime_name(ev.regime()));
  out.summary["lambda"] = ev.lambda();
  return out;
}

Output cmd_backbone(const ExperimentConfig& c) {
  const double t = c.t.value_or(1.0);
  const double z0 = c.z0.value_or(1.0);
  const SimulationConfig s = sim_config(c, t, 1000);
  BackboneOptions opts;
  opts.eps = c.eps.value_or(opts.eps);
  const BackboneResult bb = backbone_simulate(c.params, z0, s, opts);
  SimulationConfig ref_cfg = s;
  ref_cfg.seed = s.seed ^ kReferenceSeedMix;
  const ThetaEvaluator ev(c.params);
  const TrajectorySet ref = simulate_conditioned(ev, z0, ref_cfg);
  const KsResult ks =
      ks_two_sample(bb.trajectories.final_z(), ref.final_z());

  Output out;
  out.table.columns = {"replica", "initial_families", "immigrant_families",
                       "violated", "z_final"};
  json families = json::array();
  for (std::size_t r = 0; r < bb.reports.size(); ++r) {
    const auto& rep = bb.reports[r];
    out.table.rows.push_back(
        {static_cast<std::int64_t>(r),
         static_cast<std::int64_t>(rep.initial_families),
         static_cast<std::int64_t>(rep.immigrant_families),
         static_cast<std::int64_t>(rep.violated ? 1 : 0),
         bb.trajectories.paths[r].z.back()});
  }
  out.summary["eps"] = opts.eps;
  out.summary["violation_rate"] = bb.violation_rate;
  out.summary["ks"] = {{"reference", "condition"},
                       {"reference_seed", ref_cfg.seed},
                       {"statistic", ks.statistic},
                       {"p_value", ks.p_value}};
  return out;
}

Output cmd_asymptotics(const ExperimentConfig& c) {
  const ThetaEvaluator ev(c.params);
  const std::size_t points = c.points.value_or(25);
  if (points < 2) throw ConfigError("asymptotics: --points must be >= 2");
  Output out;
  out.table.columns = {"z", "vartheta", "vartheta_prime", "hdrift"};
  for (std::size_t k = 0; k < points; ++k) {
    const double z = std::pow(10.0, -3.0 + 6.0 * static_cast<double>(k) /
                                             static_cast<double>(points - 1));
    out.table.rows.push_back({z, ev.vartheta(z), ev.vartheta_prime(z),
                              ev.hdrift(z)});
  }
  const AsymptoticProfile prof = decay_profile(c.params);
  json& s = out.summary;
  s["regime"] = std::string(regime_name(ev.regime()));
  s["lambda"] = prof.lambda;
  s["poly_power"] = prof.poly_power;
  s["beta"] = prof.beta;
  s["vartheta_1"] = ev.vartheta(1.0);
  s["vartheta_prime_1"] = ev.vartheta_prime(1.0);
  if (ev.regime() == Regime::kWeaklySubcritical) {
    const WeakGrowthConstants g = weak_growth_constants(ev);
    s["c_theta"] = g.c_theta;
    s["c_theta_prime"] = g.c_theta_prime;
  }
  return out;
}

Output cmd_density(const ExperimentConfig& c) {
  const double beta = need(c.beta, "beta", c);
  const double v = need(c.v, "v", c);
  const double a_max = c.a_max.value_or(10.0);
  const std::size_t points = c.points.value_or(200);
  if (!(a_max > 0.0) || points < 1) {
    throw ConfigError("density: --a-max must be > 0 and --points >= 1");
  }
  Output out;
  out.table.columns = {"a", "p_value"};
  json diagnostics = json::array();
  for (std::size_t k = 1; k <= points; ++k) {
    const double a =
        a_max * static_cast<double>(k) / static_cast<double>(points);
    const PointValue p = density_inv_two_A_detail(v, beta, a);
    out.table.rows.push_back({a, p.value});
    diagnostics.push_back({{"a", a}, {"error", p.error}, {"panels", p.panels}});
  }
  out.summary["diagnostics"] = std::move(diagnostics);
  out.summary["form"] = beta == 0.0 ? "critical" : "general";
  out.summary["beta"] = beta;
  out.summary["v"] = v;
  return out;
}

Output cmd_bpre_converge(const ExperimentConfig& c) {
  const std::vector<std::int64_t> n_list =
      c.n_list.empty() ? std::vector<std::int64_t>{50, 200, 800} : c.n_list;
  const auto rows = convergence_diagnostic(
      c.params, c.z0.value_or(1.0), n_list, c.t.value_or(1.0),
      c.n.value_or(10000), c.dt.value_or(0.0), seed_of(c));
  Output out;
  out.table.columns = {"n", "ks_distance", "survival_bpre", "survival_bdre",
                       "se"};
  for (const auto& r : rows) {
    const double se = std::hypot(r.survival_bpre.std_error,
                                 r.survival_bdre.std_error);
    out.table.rows.push_back({static_cast<std::int64_t>(r.n), r.ks_distance,
                              r.survival_bpre.mean, r.survival_bdre.mean, se});
  }
  return out;
}

Output cmd_regime_table(const ExperimentConfig& c) {
  const double se2 = c.params.sigma_e2;
  if (!(se2 > 0.0)) {
    throw DomainError(
        "regime-table: degenerate environment (sigma_e2 = 0) has no regimes");
  }
  const double t = c.t.value_or(5.0);
  const double z0 = c.z0.value_or(1.0);
  const std::size_t n = c.n.value_or(10000);
  const std::uint64_t seed = seed_of(c);
  // One representative alpha per regime, in units of sigma_e2.
  const double multipliers[] = {0.5, 0.0, -0.5, -1.0, -2.0};
  Output out;
  out.table.columns = {"regime", "alpha",        "lambda",  "poly_power",
                       "vartheta_1", "t",        "mc_estimate", "mc_se",
                       "quadrature_estimate"};
  for (double m : multipliers) {
    ModelParams p = c.params;
    p.alpha = m * se2;
    p.theta = 0.0;
    const ThetaEvaluator ev(p);
    const AsymptoticProfile prof = decay_profile(p);
    const McEstimate mc = mc_survival(p, z0, t, n, seed, c.dt.value_or(0.0));
    const double quad = survival_exact(p, z0, t);
    out.table.rows.push_back({std::string(regime_name(ev.regime())), p.alpha,
                              prof.lambda, prof.poly_power, ev.vartheta(1.0), t,
                              mc.mean, mc.std_error, quad});
  }
  return out;
}

Output dispatch(const ExperimentConfig& c) {
  c.params.validate();
  switch (c.command) {
    case Command::kSurvival: return cmd_survival(c);
    case Command::kSimulate: return cmd_simulate(c);
    case Command::kCondition: return cmd_condition(c);
    case Command::kBackbone: return cmd_backbone(c);
    case Command::kAsymptotics: return cmd_asymptotics(c);
    case Command::kDensity: return cmd_density(c);
    case Command::kBpreConverge: return cmd_bpre_converge(c);
    case Command::kRegimeTable: return cmd_regime_table(c);
  }
  throw ConfigError("unknown command");
}

}  // namespace

std::string render(const ExperimentConfig& config) {
  if (consumes_randomness(config)) (void)seed_of(config);
  const Output out = dispatch(config);
  const json prov = provenance(config);
  if (effective_format(config) == Format::kCsv) {
    std::string s = "# " + prov.dump() + "\n";
    for (std::size_t i = 0; i < out.table.columns.size(); ++i) {
      if (i) s += ',';
      s += out.table.columns[i];
    }
    s += '\n';
    for (const auto& row : out.table.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) {
        if (i) s += ',';
        s += cell_text(row[i]);
      }
      s += '\n';
    }
    return s;
  }
  json doc;
  doc["provenance"] = prov;
  doc["summary"] = out.summary;
  json rows = json::array();
  for (const auto& row : out.table.rows) {
    json r = json::object();
    for (std::size_t i = 0; i < row.size(); ++i) {
      r[out.table.columns[i]] = cell_json(row[i]);
    }
    rows.push_back(std::move(r));
  }
  doc["rows"] = std::move(rows);
  return doc.dump(2) + "\n";
}

void write_atomic(const std::string& path, const std::string& contents) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += fmt::format(".tmp.{}", static_cast<long>(::getpid()));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write '" + tmp.string() + "'");
    out << contents;
    out.flush();
    if (!out) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw ConfigError("write failed for '" + tmp.string() + "'");
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw ConfigError("cannot move output into place at '" + path + "'");
  }
}

void run(const ExperimentConfig& config) {
  const std::string contents = render(config);
  if (config.output_path.empty()) {
    std::cout << contents;
    std::cout.flush();
  } else {
    write_atomic(config.output_path, contents);
  }
}

}  // namespace bdre::cli
