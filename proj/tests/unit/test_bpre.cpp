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
#include <string>
#include <vector>

#include <boost/math/distributions/normal.hpp>
#include <gtest/gtest.h>

#include "bdre/bpre.hpp"
#include "bdre/errors.hpp"
#include "bdre/stats.hpp"

namespace bdre {
namespace {

TEST(Bpre, Offsets) {
  BpreConfig c;
  c.alpha = 0.3;
  c.sigma_e2 = 0.8;
  EXPECT_DOUBLE_EQ(c.log_mean_offset(), 0.3);
  c.drift = BpreDrift::kMeanOffspring;
  EXPECT_DOUBLE_EQ(c.log_mean_offset(), 0.3 - 0.4);
}

TEST(Bpre, Validation) {
  BpreConfig c;
  c.n = 0;
  EXPECT_THROW(c.validate(), ConfigError);
  c = {};
  c.generations = 0;
  EXPECT_THROW(c.validate(), ConfigError);
  c = {};
  c.sigma_e2 = -1.0;
  EXPECT_THROW(c.validate(), DomainError);
  c = {};
  c.z0_mass = 1e17;
  EXPECT_THROW(c.validate(), StabilityError);
}

TEST(Bpre, PathShapeAndDeterminism) {
  BpreConfig c;
  c.n = 50;
  c.generations = 80;
  c.alpha = -0.2;
  const BprePath a = simulate_bpre(c, 7, 3, 1);
  const BprePath b = simulate_bpre(c, 7, 3, 1);
  EXPECT_EQ(a.population, b.population);
  EXPECT_EQ(a.walk, b.walk);
  ASSERT_EQ(a.population.size(), 81u);
  ASSERT_EQ(a.walk.size(), 81u);
  ASSERT_EQ(a.means.size(), 80u);
  EXPECT_EQ(a.population.front(), 50);
  EXPECT_EQ(a.walk.front(), 0.0);
  for (std::size_t k = 1; k < a.walk.size(); ++k) {
    EXPECT_NEAR(a.walk[k] - a.walk[k - 1], std::sqrt(50.0) * std::log(a.means[k - 1]),
                1e-12);
  }
  EXPECT_NE(simulate_bpre(c, 7, 4, 1).walk, a.walk);
}

TEST(Bpre, FlatEnvironmentIsCritical) {
  BpreConfig c;
  c.n = 40;
  c.generations = 40;
  c.sigma_e2 = 0.0;
  std::vector<double> finals;
  for (std::uint64_t r = 0; r < 4000; ++r) {
    const BprePath p = simulate_bpre(c, 8, r);
    for (double m : p.means) ASSERT_EQ(m, 1.0);
    finals.push_back(static_cast<double>(p.population.back()));
  }
  EXPECT_LT(z_score(mc_estimate(finals), 40.0), 4.0);
}

TEST(Bpre, MeanGrowthMatchesDiffusionMean) {
  // E[Z_n / n] = z0 exp(alpha + sigma_e2 / 2) with a = alpha.
  BpreConfig c;
  c.n = 100;
  c.generations = 100;
  c.alpha = -0.3;
  c.sigma_e2 = 0.5;
  std::vector<double> finals;
  for (std::uint64_t r = 0; r < 20000; ++r) {
    finals.push_back(static_cast<double>(simulate_bpre(c, 9, r).population.back()) /
                     100.0);
  }
  EXPECT_LT(z_score(mc_estimate(finals), std::exp(-0.05)), 4.0);
}

TEST(Bpre, WalkMarginal) {
  BpreConfig c;
  c.n = 64;
  c.generations = 128;  // t = 2
  c.alpha = 0.4;
  c.sigma_e2 = 0.7;
  c.z0_mass = 0.0;
  std::vector<double> w;
  for (std::uint64_t r = 0; r < 5000; ++r) {
    w.push_back(simulate_bpre(c, 10, r).walk.back() / std::sqrt(64.0));
  }
  const boost::math::normal_distribution<double> law(0.8, std::sqrt(1.4));
  EXPECT_GT(ks_one_sample(w, [&](double x) { return boost::math::cdf(law, x); })
                .p_value,
            1e-3);
}

TEST(Bpre, MeanOffspringDrift) {
  // n E[m - 1] = n (exp(alpha / n) - 1) under the mean-offspring offset.
  BpreConfig c;
  c.n = 100;
  c.generations = 1000;
  c.alpha = 0.3;
  c.sigma_e2 = 1.0;
  c.z0_mass = 0.0;
  c.drift = BpreDrift::kMeanOffspring;
  std::vector<double> dm;
  for (std::uint64_t r = 0; r < 1000; ++r) {
    for (double m : simulate_bpre(c, 11, r).means) dm.push_back(100.0 * (m - 1.0));
  }
  EXPECT_LT(z_score(mc_estimate(dm), 100.0 * std::expm1(0.3 / 100.0)), 4.0);
}

TEST(Bpre, OverflowGuard) {
  BpreConfig c;
  c.n = 1;
  c.generations = 3;
  c.alpha = 50.0;
  c.sigma_e2 = 0.0;
  EXPECT_THROW(simulate_bpre(c, 1), StabilityError);
}

TEST(Bpre, ConvergenceInputs) {
  try {
    convergence_diagnostic({0.0, 2.0, 1.0, 0.0}, 1.0, {10}, 1.0, 100, 1e-3, 1);
    FAIL() << "expected DomainError";
  } catch (const DomainError& e) {
    EXPECT_NE(std::string(e.what()).find("sigma_b2 == 1"), std::string::npos);
  }
  EXPECT_THROW(
      convergence_diagnostic({0.0, 1.0, 1.0, 0.5}, 1.0, {10}, 1.0, 100, 1e-3, 1),
      DomainError);
  EXPECT_THROW(convergence_diagnostic({0.0, 1.0, 1.0, 0.0}, 1.0, {20, 10}, 1.0,
                                      100, 1e-3, 1),
               ConfigError);
  EXPECT_THROW(
      convergence_diagnostic({0.0, 1.0, 1.0, 0.0}, 1.0, {10}, 1.0, 99, 1e-3, 1),
      ConfigError);
}

TEST(Bpre, ConvergenceRows) {
  const std::vector<BpreConvergenceRow> rows = convergence_diagnostic(
      {-0.2, 1.0, 1.0, 0.0}, 1.0, {20, 80}, 1.0, 400, 1e-2, 12);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].n, 20);
  EXPECT_EQ(rows[1].n, 80);
  for (const auto& r : rows) {
    EXPECT_GE(r.ks_distance, 0.0);
    EXPECT_LE(r.ks_distance, 1.0);
    EXPECT_LT(z_score(r.survival_bpre, r.survival_bdre), 5.0);
    EXPECT_GT(r.walk_ks.p_value, 1e-4);
  }
  EXPECT_EQ(rows[0].survival_bdre.mean, rows[1].survival_bdre.mean);
}

}  // namespace
}  // namespace bdre
