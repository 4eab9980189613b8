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

#include <cmath>
#include <limits>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <gtest/gtest.h>

#include "bdre/asymptotics.hpp"
#include "bdre/errors.hpp"
#include "bdre/exact.hpp"
#include "bdre/simulate.hpp"
#include "bdre/stats.hpp"

namespace bdre {
namespace {

using Gk = boost::math::quadrature::gauss_kronrod<double, 61>;
constexpr double kInf = std::numeric_limits<double>::infinity();

TEST(Simulate, DefaultDt) {
  EXPECT_DOUBLE_EQ(default_dt({0.5, 1.0, 1.0, 0.0}), 1e-3 / 1.5);
  EXPECT_DOUBLE_EQ(default_dt({-0.2, 1.0, 0.3, 0.0}), 1e-3);
}

TEST(Simulate, EulerStepByHand) {
  const ModelParams p{-0.4, 2.0, 0.5, 0.3};
  const double dt = 0.01, z = 1.2, ne = 0.7, nb = -1.1;
  double s = 0.25;
  const double ds = -0.4 * dt + std::sqrt(0.5 * dt) * ne;
  const double expect = z + (0.3 + 0.25 * z) * dt + z * ds +
                        std::sqrt(2.0 * z * dt) * nb;
  EXPECT_NEAR(bdre_euler_step(p, dt, z, s, ne, nb), expect, 1e-15);
  EXPECT_NEAR(s, 0.25 + ds, 1e-15);
  double s2 = 0.0;
  // Negative input is truncated to 0 inside the coefficients.
  EXPECT_NEAR(bdre_euler_step(p, dt, -0.5, s2, ne, nb), -0.5 + 0.3 * dt, 1e-15);
}

TEST(Simulate, RecordGridAndAbsorption) {
  const ModelParams p{-1.0, 1.0, 1.0, 0.0};
  const TrajectorySet set = simulate_bdre(p, 0.2, {2.0, 0.01, 50, 4, 20});
  ASSERT_EQ(set.times.size(), 11u);
  EXPECT_NEAR(set.times.back(), 2.0, 1e-12);
  EXPECT_EQ(set.paths.size(), 50u);
  std::size_t absorbed = 0;
  for (const Trajectory& tr : set.paths) {
    ASSERT_EQ(tr.z.size(), set.times.size());
    EXPECT_EQ(tr.z.front(), 0.2);
    EXPECT_EQ(tr.s.front(), 0.0);
    for (double z : tr.z) EXPECT_GE(z, 0.0);
    if (tr.absorbed_at) {
      ++absorbed;
      EXPECT_EQ(tr.z.back(), 0.0);
      EXPECT_LE(*tr.absorbed_at, 2.0);
    }
  }
  EXPECT_GT(absorbed, 0u);
  EXPECT_EQ(set.final_z().size(), 50u);
}

TEST(Simulate, MeanGrowth) {
  // E[Z_t] solves m' = theta + (alpha + sigma_e2 / 2) m.
  const ModelParams p{0.0, 1.0, 1.0, 0.0};
  const McEstimate a = mc_estimate(simulate_bdre(p, 1.0, {1.0, 1e-3, 20000, 8, 0}).final_z());
  EXPECT_LT(z_score(a, std::exp(0.5)), 4.0) << a.mean;
  const McEstimate b = mc_estimate(
      simulate_via_time_change(p, 1.0, {1.0, 1e-3, 20000, 9, 0}).final_z());
  EXPECT_LT(z_score(b, std::exp(0.5)), 4.0) << b.mean;
  const ModelParams q{-0.5, 1.0, 1.0, 0.7};
  const McEstimate c = mc_estimate(simulate_bdre(q, 1.0, {1.0, 1e-3, 20000, 10, 0}).final_z());
  EXPECT_LT(z_score(c, 1.7), 4.0) << c.mean;
}

TEST(Simulate, SurvivalAgainstExact) {
  const ModelParams p{-1.0, 1.0, 1.0, 0.0};
  const McEstimate mc = mc_survival(p, 1.0, 2.0, 20000, 12, 1e-3);
  const double exact = survival_exact(p, 1.0, 2.0);
  EXPECT_LT(std::abs(mc.mean - exact), 4.0 * mc.std_error + 5e-3)
      << mc.mean << " vs " << exact;
}

TEST(Simulate, ThetaMartingale) {
  const ThetaEvaluator ev({-0.5, 1.0, 1.0, 0.0});
  const double t = 1.0;
  const McEstimate m = theta_martingale(ev, 1.0, t, 40000, 13, 1e-3);
  const McEstimate scaled{std::exp(ev.lambda() * t) * m.mean,
                          std::exp(ev.lambda() * t) * m.std_error, m.n};
  EXPECT_LT(std::abs(scaled.mean - ev.vartheta(1.0)),
            4.0 * scaled.std_error + 0.01 * ev.vartheta(1.0))
      << scaled.mean << " vs " << ev.vartheta(1.0);
}

TEST(Simulate, ReweightedTotalIsOne) {
  const ThetaEvaluator ev({-2.0, 1.0, 1.0, 0.0});
  const ReweightedResult r =
      reweighted_expectation(ev, 1.0, 1.0, {0.0, 0.5, 1.0, kInf}, 20000, 14, 1e-3);
  EXPECT_LT(std::abs(r.total.mean - 1.0), 4.0 * r.total.std_error + 0.01);
  ASSERT_EQ(r.bins.size(), 3u);
}

TEST(Simulate, ConditionedDrift) {
  const ModelParams p{-0.5, 2.0, 1.0, 0.0};
  const ThetaEvaluator ev(p);
  const double z = 0.8;
  const double l = z * ev.vartheta_prime(z) / ev.vartheta(z);
  const ConditionedDrift d = conditioned_drift(ev, z);
  // The drift reads the tabulated slope.
  EXPECT_NEAR(d.z_drift, 2.0 * l + 0.5 * z, 1e-4);
  EXPECT_NEAR(d.s_drift, -0.5 + l, 1e-4);
}

TEST(Simulate, ConditionedPathsStayPositive) {
  const ThetaEvaluator ev({-2.0, 1.0, 1.0, 0.0});
  const TrajectorySet set = simulate_conditioned(ev, 0.5, {5.0, 1e-3, 200, 15, 500});
  for (const Trajectory& tr : set.paths) {
    for (double z : tr.z) EXPECT_GT(z, 0.0);
    EXPECT_FALSE(tr.absorbed_at.has_value());
  }
}

TEST(Simulate, BinFrequencies) {
  const std::vector<McEstimate> b =
      bin_frequencies({0.1, 0.2, 0.6, 0.9, 1.5, -1.0}, {0.0, 0.5, 1.0});
  ASSERT_EQ(b.size(), 2u);
  EXPECT_DOUBLE_EQ(b[0].mean, 2.0 / 6.0);
  EXPECT_DOUBLE_EQ(b[1].mean, 2.0 / 6.0);
}

// exp(-int_1^y 2 mu / sigma^2) with the conditioned drift and variance
// integrated numerically.
double scale_density_oracle(const ThetaEvaluator& ev, double y) {
  const ModelParams& p = ev.params();
  auto ratio = [&](double x) {
    const double l = x * ev.vartheta_prime(x) / ev.vartheta(x);
    const double mu = p.sigma_b2 * l + 0.5 * p.sigma_e2 * x + p.alpha * x +
                      p.sigma_e2 * x * l;
    return 2.0 * mu / (p.sigma_e2 * x * x + p.sigma_b2 * x);
  };
  const double lo = std::min(1.0, y), hi = std::max(1.0, y);
  const double v = Gk::integrate(ratio, lo, hi, 8, 1e-11);
  return std::exp(y >= 1.0 ? -v : v);
}

TEST(Simulate, ScaleDensityMatchesNestedIntegral) {
  for (double alpha : {0.3, 0.0, -0.5, -2.0}) {
    const ThetaEvaluator ev({alpha, 1.5, 1.0, 0.0});
    for (double y : {0.05, 0.5, 3.0, 40.0}) {
      const double o = scale_density_oracle(ev, y);
      EXPECT_NEAR(scale_density(ev, y), o, 1e-7 * o)
          << "alpha=" << alpha << " y=" << y;
    }
  }
}

TEST(Simulate, ScaleFunction) {
  const ThetaEvaluator ev({-0.5, 1.0, 1.0, 0.0});
  EXPECT_EQ(scale_function(ev, 1.0), 0.0);
  const double r = scale_function(ev, 4.0);
  auto g = [&](double y) { return scale_density_oracle(ev, y); };
  EXPECT_NEAR(r, Gk::integrate(g, 1.0, 4.0, 6, 1e-9), 1e-7 * r);
  EXPECT_LT(scale_function(ev, 0.5), 0.0);
  EXPECT_THROW(scale_function(ev, 0.0), DomainError);
}

TEST(Simulate, BoundaryClassification) {
  // Transient to infinity when alpha > -sigma_e2, recurrent below.
  for (double alpha : {0.5, 0.0, -0.5}) {
    const BoundaryClassification b =
        boundary_classification(ThetaEvaluator({alpha, 1.0, 1.0, 0.0}));
    EXPECT_TRUE(b.r0_is_minus_inf) << alpha;
    EXPECT_TRUE(b.rinf_finite) << alpha;
  }
  const BoundaryClassification s =
      boundary_classification(ThetaEvaluator({-2.0, 1.0, 1.0, 0.0}));
  EXPECT_TRUE(s.r0_is_minus_inf);
  EXPECT_FALSE(s.rinf_finite);
  EXPECT_EQ(s.r_large, scale_function(ThetaEvaluator({-2.0, 1.0, 1.0, 0.0}), 1e6));
}

TEST(Simulate, WeakScaleTail) {
  // vartheta(y) ~ c y^{beta/2} log y makes the scale density
  // ~ (vartheta(1) / c)^2 / (y log^2 y) when alpha = -sigma_e2 / 2.
  const ThetaEvaluator ev({-0.5, 1.0, 1.0, 0.0});
  const BoundaryClassification b = boundary_classification(ev);
  const double k = std::pow(ev.vartheta(1.0) / weak_growth_constants(ev).c_theta, 2);
  auto tail = [&](double y) { return -k / std::log(y); };
  const double expect = tail(1e12) - tail(1e6);
  EXPECT_NEAR(b.r_huge - b.r_large, expect, 0.1 * expect);
}

TEST(Simulate, StationaryLaw) {
  const ModelParams p{-3.0, 0.5, 1.0, 0.0};
  auto shape = [&](double y) { return y * std::pow(0.5 + y, -6.0); };
  const double mass = Gk::integrate(shape, 0.0, kInf, 15, 1e-13);
  for (double y : {0.1, 1.0, 5.0}) {
    EXPECT_NEAR(stationary_density(p, y), shape(y) / mass, 1e-10);
    EXPECT_NEAR(stationary_cdf(p, y),
                Gk::integrate(shape, 0.0, y, 15, 1e-13) / mass, 1e-10);
  }
  EXPECT_EQ(stationary_cdf(p, 0.0), 0.0);
  EXPECT_THROW(stationary_density({-0.5, 1.0, 1.0, 0.0}, 1.0), DomainError);
}

TEST(Simulate, ConfigChecks) {
  const ModelParams p{-0.5, 1.0, 1.0, 0.0};
  EXPECT_THROW(simulate_bdre(p, 1.0, {1.0, 1e-3, 0, 1, 0}), ConfigError);
  EXPECT_THROW(simulate_bdre(p, -1.0, {1.0, 1e-3, 10, 1, 0}), DomainError);
}

}  // namespace
}  // namespace bdre
