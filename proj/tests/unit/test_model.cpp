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

#include <gtest/gtest.h>

#include "bdre/errors.hpp"
#include "bdre/model.hpp"

namespace bdre {
namespace {

ModelParams unit(double alpha) { return ModelParams{alpha, 1.0, 1.0, 0.0}; }

TEST(Model, ClassifiesAllFiveRegimes) {
  EXPECT_EQ(classify_regime(unit(0.5)), Regime::kSupercritical);
  EXPECT_EQ(classify_regime(unit(0.0)), Regime::kCritical);
  EXPECT_EQ(classify_regime(unit(-0.5)), Regime::kWeaklySubcritical);
  EXPECT_EQ(classify_regime(unit(-1.0)), Regime::kIntermediatelySubcritical);
  EXPECT_EQ(classify_regime(unit(-2.0)), Regime::kStronglySubcritical);
}

TEST(Model, BoundariesScaleWithEnvironmentVariance) {
  ModelParams p{-2.0, 1.0, 2.0, 0.0};
  EXPECT_EQ(classify_regime(p), Regime::kIntermediatelySubcritical);
  p.alpha = -1.999;
  EXPECT_EQ(classify_regime(p), Regime::kWeaklySubcritical);
  p.alpha = -2.001;
  EXPECT_EQ(classify_regime(p), Regime::kStronglySubcritical);
  p.alpha = 1e-300;
  EXPECT_EQ(classify_regime(p), Regime::kSupercritical);
}

TEST(Model, DegenerateEnvironmentHasNoRegime) {
  try {
    classify_regime(ModelParams{-1.0, 1.0, 0.0, 0.0});
    FAIL() << "expected DomainError";
  } catch (const DomainError& e) {
    EXPECT_NE(std::string(e.what()).find("Feller"), std::string::npos);
  }
}

TEST(Model, RegimeNamesRoundTrip) {
  for (Regime r : {Regime::kSupercritical, Regime::kCritical,
                   Regime::kWeaklySubcritical,
                   Regime::kIntermediatelySubcritical,
                   Regime::kStronglySubcritical}) {
    EXPECT_EQ(parse_regime(regime_name(r)), r);
  }
  EXPECT_THROW(parse_regime("subcritical"), ConfigError);
}

TEST(Model, ValidateRejectsBadParameters) {
  EXPECT_THROW((ModelParams{0.0, 0.0, 1.0, 0.0}.validate()), ConfigError);
  EXPECT_THROW((ModelParams{0.0, 1.0, -1.0, 0.0}.validate()), ConfigError);
  EXPECT_THROW((ModelParams{0.0, 1.0, 1.0, -0.1}.validate()), ConfigError);
  EXPECT_THROW((ModelParams{NAN, 1.0, 1.0, 0.0}.validate()), ConfigError);
  EXPECT_NO_THROW((ModelParams{-3.0, 2.0, 0.5, 1.0}.validate()));
}

TEST(Model, DecayProfiles) {
  const AsymptoticProfile sup = decay_profile(unit(0.5));
  EXPECT_EQ(sup.lambda, 0.0);
  EXPECT_EQ(sup.poly_power, 0.0);
  const AsymptoticProfile crit = decay_profile(unit(0.0));
  EXPECT_EQ(crit.lambda, 0.0);
  EXPECT_EQ(crit.poly_power, 0.5);
  const AsymptoticProfile weak = decay_profile(unit(-0.5));
  EXPECT_DOUBLE_EQ(weak.lambda, 0.125);
  EXPECT_EQ(weak.poly_power, 1.5);
  EXPECT_DOUBLE_EQ(weak.beta, 1.0);
  const AsymptoticProfile inter = decay_profile(unit(-1.0));
  EXPECT_DOUBLE_EQ(inter.lambda, 0.5);
  EXPECT_EQ(inter.poly_power, 0.5);
  const AsymptoticProfile strong = decay_profile(unit(-2.0));
  EXPECT_DOUBLE_EQ(strong.lambda, 1.5);
  EXPECT_EQ(strong.poly_power, 0.0);
}

TEST(Model, FunctionF) {
  const ModelParams p{0.0, 2.0, 1.0, 0.0};  // c = 1/2
  EXPECT_EQ(f_eval(p, 0.0), 0.0);
  EXPECT_EQ(f_eval(p, INFINITY), 1.0);
  EXPECT_NEAR(f_eval(p, 2.0), 1.0 - std::exp(-1.0), 1e-15);
  EXPECT_NEAR(f_derivative(p, 1, 2.0), 0.5 * std::exp(-1.0), 1e-15);
  EXPECT_NEAR(f_derivative(p, 2, 2.0), -0.25 * std::exp(-1.0), 1e-15);
  EXPECT_NEAR(f_derivative(p, 3, 0.0), 0.125, 1e-15);
  EXPECT_THROW(f_eval(p, -1.0), DomainError);
  EXPECT_THROW(f_derivative(p, -1, 1.0), DomainError);
  // Tiny arguments keep full relative precision.
  EXPECT_NEAR(f_eval(p, 1e-12) / 5e-13, 1.0, 1e-12);
}

TEST(Model, BetaOf) {
  EXPECT_DOUBLE_EQ(beta_of(ModelParams{-0.5, 1.0, 2.0, 0.0}), 0.5);
  EXPECT_THROW(beta_of(ModelParams{-0.5, 1.0, 0.0, 0.0}), DomainError);
}

TEST(Errors, ExitCodesAndKinds) {
  EXPECT_EQ(ConfigError("x").exit_code(), 2);
  EXPECT_EQ(DomainError("x").exit_code(), 2);
  EXPECT_EQ(StabilityError("x").exit_code(), 3);
  EXPECT_EQ(AccuracyError("x").exit_code(), 4);
  EXPECT_STREQ(StabilityError("x").kind(), "stability");
}

}  // namespace
}  // namespace bdre
