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

// Acceptance gate. Usage: acceptance <criterion>... (1-16) or "all".
// Prints one PASS/FAIL line per criterion; exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>
#include <vector>

#include <boost/math/distributions/gamma.hpp>
#include <fmt/format.h>

#include "bdre/asymptotics.hpp"
#include "bdre/backbone.hpp"
#include "bdre/bpre.hpp"
#include "bdre/env_path.hpp"
#include "bdre/exact.hpp"
#include "bdre/model.hpp"
#include "bdre/rng.hpp"
#include "bdre/simulate.hpp"
#include "bdre/stats.hpp"

namespace {

using namespace bdre;

struct Outcome {
  bool pass = false;
  std::string detail;
};

constexpr double kPi = 3.14159265358979323846;

double rel_err(double x, double target) {
  return std::abs(x - target) / std::abs(target);
}

bool strictly_decreasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (!(v[i] < v[i - 1])) return false;
  }
  return true;
}

std::string join(const std::vector<double>& v, const char* f = "{:.4g}") {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    s += fmt::format(fmt::runtime(f), v[i]);
  }
  return s;
}

// Samples of 1/(2 A_v^{(beta)}) on the trapezoid grid dt.
std::vector<double> inv_two_a_samples(double beta, double v, double dt,
                                      std::size_t n, std::uint64_t seed) {
  std::vector<double> out(n);
  for (std::size_t r = 0; r < n; ++r) {
    RandomStream rng(StreamId{seed, r, StreamTag::kAuxiliary, 0});
    out[r] = 0.5 / sample_exp_functional(beta, v, dt, rng).value;
  }
  return out;
}

const std::vector<double> kRegimeAlphas{0.5, 0.0, -0.5, -1.0, -2.0};

ModelParams unit_params(double alpha) {
  return ModelParams{alpha, 1.0, 1.0, 0.0};
}

Outcome ac01() {
  const ModelParams p = unit_params(0.5);
  const McEstimate mc = mc_survival(p, 1.0, 50.0, 100000, 101, 0.01);
  const double ex = survival_exact(p, 1.0, 80.0);
  const bool pass = std::abs(mc.mean - 0.5) <= 0.02 && std::abs(ex - 0.5) <= 0.02;
  return {pass, fmt::format("mc(t=50, dt=0.01)={:.4f}+-{:.4f}, exact(t=80)={:.7f}, "
                            "target 0.5 +- 0.02",
                            mc.mean, mc.std_error, ex)};
}

Outcome ac02() {
  const ModelParams p = unit_params(0.0);
  const double c = std::sqrt(2.0 / kPi) * std::log(2.0);
  std::vector<double> vals, errs;
  for (double t : {50.0, 100.0, 200.0}) {
    vals.push_back(std::sqrt(t) * survival_exact(p, 1.0, t));
    errs.push_back(rel_err(vals.back(), c));
  }
  const bool within = std::all_of(errs.begin(), errs.end(),
                                  [](double e) { return e <= 0.10; });
  const bool last_closest = errs[2] <= errs[0] && errs[2] <= errs[1];
  return {within && last_closest,
          fmt::format("sqrt(t)P at t=50,100,200: {} vs {:.4f}; rel err {}",
                      join(vals, "{:.5f}"), c, join(errs, "{:.4f}"))};
}

Outcome ac03() {
  const ModelParams p = unit_params(-1.0);
  const double c = std::sqrt(2.0 / kPi);
  std::vector<double> vals, errs;
  for (double t : {10.0, 20.0, 30.0}) {
    vals.push_back(std::sqrt(t) * std::exp(0.5 * t) * survival_exact(p, 1.0, t));
    errs.push_back(rel_err(vals.back(), c));
  }
  const bool pass = strictly_decreasing(errs) && errs.back() <= 0.15;
  return {pass, fmt::format("sqrt(t)e^(t/2)P at t=10,20,30: {} vs {:.4f}; rel err {}",
                            join(vals, "{:.5f}"), c, join(errs, "{:.4f}"))};
}

Outcome ac04() {
  const ModelParams p = unit_params(-2.0);
  std::vector<double> vals, errs;
  for (double t : {5.0, 10.0, 15.0}) {
    vals.push_back(std::exp(1.5 * t) * survival_exact(p, 1.0, t));
    errs.push_back(rel_err(vals.back(), 2.0));
  }
  const bool pass = strictly_decreasing(errs) && errs.back() <= 0.10;
  return {pass, fmt::format("e^(1.5t)P at t=5,10,15: {} vs 2; rel err {}",
                            join(vals, "{:.6f}"), join(errs, "{:.4f}"))};
}

Outcome ac05() {
  const ModelParams p = unit_params(-0.5);
  const ThetaEvaluator ev(p);
  const double c = ev.vartheta(1.0);
  std::vector<double> vals, errs;
  for (double t : {20.0, 40.0, 80.0}) {
    vals.push_back(std::pow(t, 1.5) * std::exp(t / 8.0) *
                   survival_exact(p, 1.0, t));
    errs.push_back(rel_err(vals.back(), c));
  }
  const bool pass = strictly_decreasing(errs) && errs.back() <= 0.15;
  return {pass,
          fmt::format("t^1.5 e^(t/8) P at t=20,40,80: {} vs phi-constant {:.5f}; "
                      "rel err {}",
                      join(vals, "{:.5f}"), c, join(errs, "{:.4f}"))};
}

Outcome ac06() {
  double worst_mass = 0.0;
  for (double v : {0.5, 1.0, 2.0}) {
    for (double b : {0.0, 0.5, 1.0, 2.0, 3.0}) {
      worst_mass = std::max(worst_mass,
                            std::abs(build_density_grid(v, b).total_mass() - 1.0));
    }
  }
  double worst_rel = 0.0;
  for (double v : {0.5, 1.0, 2.0}) {
    for (int k = 0; k <= 40; ++k) {
      const double a = 0.05 * std::pow(400.0, k / 40.0);
      const double crit = density_inv_two_A(v, 0.0, a, {}, DensityForm::kCritical);
      const double gen = density_inv_two_A(v, 0.0, a, {}, DensityForm::kGeneral);
      worst_rel = std::max(worst_rel, rel_err(gen, crit));
    }
  }
  const double quad_mean = build_density_grid(1.0, 2.0).mean();
  const McEstimate mc =
      mc_estimate(inv_two_a_samples(2.0, 1.0, 1e-3, 100000, 601));
  const double z = z_score(mc, quad_mean);
  const bool pass = worst_mass <= 1e-4 && worst_rel <= 1e-4 && std::abs(z) <= 4.0;
  return {pass,
          fmt::format("max |mass-1| over 15 pairs {:.2e}; max rel diff beta=0 "
                      "forms {:.2e}; mean(v=1,beta=2) quad {:.6f} vs mc "
                      "{:.6f}+-{:.6f} (z={:.2f})",
                      worst_mass, worst_rel, quad_mean, mc.mean, mc.std_error, z)};
}

Outcome ac07() {
  const double v = 1.0;
  // gamma = 2: beta 2 vs beta 0; gamma = 3: beta 3 vs beta -1.
  const double lhs2 = build_density_grid(v, 2.0).mean();
  const double rhs2 = std::exp(-2.0 * v) * build_density_grid(v, 0.0).mean();
  const double lhs3 = build_density_grid(v, 3.0).mean();
  const double rhs3 = std::exp(-4.0 * v) * mean_inv_two_A_joint(-1.0, v).value;
  const double q2 = rel_err(lhs2, rhs2), q3 = rel_err(lhs3, rhs3);

  const std::size_t n = 100000;
  const double dt = 1e-3;
  double zmax = 0.0;
  std::string mc_detail;
  for (int gamma : {2, 3}) {
    const McEstimate a = mc_estimate(inv_two_a_samples(gamma, v, dt, n, 700 + gamma));
    McEstimate b = mc_estimate(inv_two_a_samples(2 - gamma, v, dt, n, 710 + gamma));
    const double f = std::exp(-(2.0 * gamma - 2.0) * v);
    b.mean *= f;
    b.std_error *= f;
    const double z = z_score(a, b);
    zmax = std::max(zmax, std::abs(z));
    mc_detail += fmt::format(" gamma={}: {:.6f}+-{:.6f} vs {:.6f}+-{:.6f} (z={:.2f});",
                             gamma, a.mean, a.std_error, b.mean, b.std_error, z);
  }
  const bool pass = q2 <= 1e-3 && q3 <= 1e-3 && zmax <= 4.0;
  return {pass, fmt::format("quadrature rel diff gamma=2 {:.2e}, gamma=3 {:.2e};{}",
                            q2, q3, mc_detail)};
}

Outcome ac08() {
  const std::vector<double> s = inv_two_a_samples(-1.0, 50.0, 1e-3, 10000, 801);
  const boost::math::gamma_distribution<double> target(2.0, 1.0);
  const KsResult ks = ks_one_sample(s, [&](double x) {
    return x <= 0.0 ? 0.0 : boost::math::cdf(target, x);
  });
  const boost::math::gamma_distribution<double> shape_one(1.0, 1.0);
  const KsResult ks1 = ks_one_sample(s, [&](double x) {
    return x <= 0.0 ? 0.0 : boost::math::cdf(shape_one, x);
  });
  const GammaLaw law = gamma_limit(2.0, 2.0);
  return {ks.p_value > 0.01,
          fmt::format("KS vs Gamma(shape 2, scale 1): D={:.4f} p={:.3g}; "
                      "sample mean {:.4f}; for reference gamma_limit gives shape "
                      "{:g}, KS vs Gamma(shape 1): D={:.4f} p={:.3g}",
                      ks.statistic, ks.p_value, mc_estimate(s).mean, law.shape,
                      ks1.statistic, ks1.p_value)};
}

Outcome ac09() {
  bool pass = true;
  std::string detail;
  for (std::size_t i = 0; i < kRegimeAlphas.size(); ++i) {
    const ThetaEvaluator ev(unit_params(kRegimeAlphas[i]));
    const double t = 2.0;
    const McEstimate m = theta_martingale(ev, 1.0, t, 100000, 900 + i);
    const double target = std::exp(-ev.lambda() * t) * ev.vartheta(1.0);
    const double z = z_score(m, target);
    pass = pass && std::abs(z) <= 4.0;
    detail += fmt::format("{}: {:.5f}+-{:.5f} vs {:.5f} (z={:.2f}); ",
                          regime_name(ev.regime()), m.mean, m.std_error, target, z);
  }
  return {pass, detail};
}

std::vector<double> decile_edges(std::vector<double> pilot) {
  std::sort(pilot.begin(), pilot.end());
  std::vector<double> edges{0.0};
  for (int k = 1; k < 10; ++k) {
    edges.push_back(pilot[pilot.size() * static_cast<std::size_t>(k) / 10]);
  }
  edges.push_back(INFINITY);
  return edges;
}

Outcome ac10() {
  bool pass = true;
  std::string detail;
  const double t = 1.0;
  for (std::size_t i = 0; i < kRegimeAlphas.size(); ++i) {
    const ThetaEvaluator ev(unit_params(kRegimeAlphas[i]));
    const auto pilot =
        simulate_conditioned(ev, 1.0, SimulationConfig{t, 0.0, 2000, 1000 + i, 0});
    const auto edges = decile_edges(pilot.final_z());
    const auto cond =
        simulate_conditioned(ev, 1.0, SimulationConfig{t, 0.0, 20000, 1010 + i, 0});
    const auto freq = bin_frequencies(cond.final_z(), edges);
    const ReweightedResult rw =
        reweighted_expectation(ev, 1.0, t, edges, 100000, 1020 + i);
    const ChiSquareResult chi = chi_square_compare(freq, rw.bins);
    pass = pass && chi.p_value > 0.01;
    detail += fmt::format("{}: chi2={:.2f} dof={:g} p={:.3g}; ",
                          regime_name(ev.regime()), chi.statistic, chi.dof,
                          chi.p_value);
  }
  return {pass, detail};
}

Outcome ac11() {
  const ModelParams p = unit_params(-2.0);
  const ThetaEvaluator ev(p);
  const double dt = default_dt(p);
  SimulationConfig cfg;
  cfg.horizon = 50.0;
  cfg.dt = dt;
  cfg.n = 2000;
  cfg.seed = 1101;
  cfg.record_every = static_cast<std::size_t>(std::llround(12.5 / dt));
  const TrajectorySet set = simulate_conditioned(ev, 1.0, cfg);
  std::vector<double> samples;
  for (const auto& path : set.paths) {
    for (std::size_t k = 0; k < set.times.size(); ++k) {
      if (set.times[k] >= 25.0 - 1e-9) samples.push_back(path.z[k]);
    }
  }
  const KsResult ks = ks_one_sample(
      samples, [&](double y) { return stationary_cdf(p, y); });
  return {ks.p_value > 0.01,
          fmt::format("{} samples at t in {{25, 37.5, 50}}: KS D={:.4f} p={:.3g}",
                      samples.size(), ks.statistic, ks.p_value)};
}

Outcome ac12() {
  const ModelParams p = unit_params(-2.0);
  const ThetaEvaluator ev(p);
  const SimulationConfig cfg{1.0, 1e-3, 10000, 1201, 0};
  BackboneOptions opt;
  opt.eps = 1e-3;
  const BackboneResult bb = backbone_simulate(p, 1.0, cfg, opt);
  const TrajectorySet cond =
      simulate_conditioned(ev, 1.0, SimulationConfig{1.0, 1e-3, 10000, 1202, 0});
  const KsResult ks = ks_two_sample(bb.trajectories.final_z(), cond.final_z());
  BackboneOptions half = opt;
  half.eps = 5e-4;
  const BackboneResult bb2 =
      backbone_simulate(p, 1.0, SimulationConfig{1.0, 1e-3, 10000, 1203, 0}, half);
  const McEstimate m1 = mc_estimate(bb.trajectories.final_z());
  const McEstimate m2 = mc_estimate(bb2.trajectories.final_z());
  const double z = z_score(m1, m2);
  const bool pass = ks.p_value > 0.01 && std::abs(z) < 2.0;
  return {pass,
          fmt::format("KS backbone vs conditioned D={:.4f} p={:.3g}; mean eps=1e-3 "
                      "{:.4f}+-{:.4f}, eps=5e-4 {:.4f}+-{:.4f} (z={:.2f}); "
                      "violation rate {:.4f}",
                      ks.statistic, ks.p_value, m1.mean, m1.std_error, m2.mean,
                      m2.std_error, z, bb.violation_rate)};
}

Outcome ac13() {
  const FellerCheckReport r =
      feller_immigration_check(1.0, 1.0, 1.0, 1.0, 1e-3, 1e-3, 10000, 1301);
  return {r.ks.p_value > 0.01,
          fmt::format("KS D={:.4f} p={:.3g}; means direct {:.4f}+-{:.4f}, "
                      "excursions {:.4f}+-{:.4f} (x0 + theta t = 2)",
                      r.ks.statistic, r.ks.p_value, r.direct_mean.mean,
                      r.direct_mean.std_error, r.excursion_mean.mean,
                      r.excursion_mean.std_error)};
}

Outcome ac14() {
  bool pass = true;
  std::string detail;
  for (double alpha : {0.5, 0.0, -0.5}) {
    const ThetaEvaluator ev(unit_params(alpha));
    double prev = INFINITY;
    bool dec = true;
    for (int k = 0; k <= 24; ++k) {
      const double h = ev.hdrift(std::ldexp(1e-3, k));
      dec = dec && h < prev;
      prev = h;
    }
    pass = pass && dec;
    detail += fmt::format("alpha={:g} decreasing={}; ", alpha, dec);
  }
  const double weak0 = ThetaEvaluator(unit_params(-0.5)).hdrift(1e-6);
  const double sup_inf = ThetaEvaluator(unit_params(0.5)).hdrift(1e4);
  pass = pass && std::abs(weak0 - 1.0) <= 1e-3 && std::abs(sup_inf) <= 5e-2;
  detail += fmt::format("weak hdrift(1e-6)={:.6f}; supercritical hdrift(1e4)={:.5f}; ",
                        weak0, sup_inf);
  for (double alpha : {-1.0, -2.0}) {
    const ThetaEvaluator ev(unit_params(alpha));
    bool constant = true;
    for (int k = 0; k <= 24; ++k) {
      constant = constant && ev.hdrift(std::ldexp(1e-3, k)) == 1.0;
    }
    pass = pass && constant;
    detail += fmt::format("alpha={:g} constant={}; ", alpha, constant);
  }
  return {pass, detail};
}

Outcome ac15() {
  bool pass = true;
  std::string detail;
  for (double theta : {0.0, 1.0}) {
    const ModelParams p{-0.5, 1.0, 1.0, theta};
    const auto seed = static_cast<std::uint64_t>(1500 + 10 * theta);
    const auto a = simulate_bdre(p, 1.0, SimulationConfig{2.0, 0.0, 10000, seed, 0});
    const auto b = simulate_via_time_change(
        p, 1.0, SimulationConfig{2.0, 0.0, 10000, seed + 1, 0});
    const KsResult ks = ks_two_sample(a.final_z(), b.final_z());
    pass = pass && ks.p_value > 0.01;
    detail += fmt::format("theta={:g}: D={:.4f} p={:.3g}; ", theta, ks.statistic,
                          ks.p_value);
  }
  return {pass, detail};
}

Outcome ac16() {
  const ModelParams p = unit_params(-0.5);
  const std::size_t replicas = 100000;
  const auto rows =
      convergence_diagnostic(p, 1.0, {50, 200, 800}, 1.0, replicas, 0.0, 1601);
  const McEstimate mc = mc_survival(p, 1.0, 1.0, replicas, 1602);
  std::vector<double> d;
  for (const auto& r : rows) d.push_back(r.ks_distance);
  const bool weakly_dec = d[1] <= d[0] && d[2] <= d[1];
  const double z = z_score(rows.back().survival_bpre, mc);
  const bool pass = weakly_dec && std::abs(z) <= 3.0;
  return {pass,
          fmt::format("KS distance n=50,200,800: {}; survival n=800 {:.4f}+-{:.4f} "
                      "vs mc_survival {:.4f}+-{:.4f} (z={:.2f})",
                      join(d, "{:.4f}"), rows.back().survival_bpre.mean,
                      rows.back().survival_bpre.std_error, mc.mean, mc.std_error, z)};
}

struct Entry {
  const char* name;
  std::function<Outcome()> run;
};

const std::vector<Entry>& registry() {
  static const std::vector<Entry> r{
      {"supercritical limit", ac01},
      {"critical rate", ac02},
      {"intermediate rate", ac03},
      {"strong rate", ac04},
      {"weak-regime constant", ac05},
      {"density suite", ac06},
      {"moment identity", ac07},
      {"gamma limit of 1/(2A_50) at beta=-1", ac08},
      {"martingale identity", ac09},
      {"h-transform equivalence", ac10},
      {"stationary law", ac11},
      {"backbone equality in law", ac12},
      {"Feller immigration decomposition", ac13},
      {"hdrift structure", ac14},
      {"equality of constructions", ac15},
      {"diffusion approximation", ac16},
  };
  return r;
}

}  // namespace

int main(int argc, char** argv) {
  std::setvbuf(stdout, nullptr, _IONBF, 0);
  std::vector<int> which;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "all") {
      for (int k = 1; k <= 16; ++k) which.push_back(k);
    } else {
      which.push_back(std::atoi(a.c_str()));
    }
  }
  if (which.empty()) {
    std::fprintf(stderr, "usage: acceptance <1..16|all>...\n");
    return 2;
  }
  int failures = 0;
  for (int k : which) {
    if (k < 1 || k > 16) {
      std::fprintf(stderr, "no criterion %d\n", k);
      return 2;
    }
    const Entry& e = registry()[static_cast<std::size_t>(k - 1)];
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = e.run();
    } catch (const std::exception& ex) {
      o = {false, std::string("exception: ") + ex.what()};
    }
    const double secs = std::chrono::duration<double>(
                            std::chrono::steady_clock::now() - start)
                            .count();
    std::printf("AC%02d %s  %s: %s [%.1fs]\n", k, o.pass ? "PASS" : "FAIL",
                e.name, o.detail.c_str(), secs);
    failures += o.pass ? 0 : 1;
  }
  return failures == 0 ? 0 : 1;
}
