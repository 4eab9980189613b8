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

#include "bdre/model.hpp"

#include <cmath>
#include <string>

#include "bdre/errors.hpp"

namespace bdre {

void ModelParams::validate() const {
  if (!std::isfinite(alpha)) throw ConfigError("alpha must be finite");
  if (!std::isfinite(sigma_b2) || !(sigma_b2 > 0.0)) {
    throw ConfigError("sigma_b2 must be finite and > 0");
  }
  if (!std::isfinite(sigma_e2) || sigma_e2 < 0.0) {
    throw ConfigError("sigma_e2 must be finite and >= 0");
  }
  if (!std::isfinite(theta) || theta < 0.0) {
    throw ConfigError("theta must be finite and >= 0 (emigration unsupported)");
  }
}

std::string_view regime_name(Regime r) {
  switch (r) {
    case Regime::kSupercritical:
      return "supercritical";
    case Regime::kCritical:
      return "critical";
    case Regime::kWeaklySubcritical:
      return "weakly_subcritical";
    case Regime::kIntermediatelySubcritical:
      return "intermediately_subcritical";
    case Regime::kStronglySubcritical:
      return "strongly_subcritical";
  }
  return "unknown";
}

Regime parse_regime(std::string_view name) {
  for (Regime r : {Regime::kSupercritical, Regime::kCritical,
                   Regime::kWeaklySubcritical,
                   Regime::kIntermediatelySubcritical,
                   Regime::kStronglySubcritical}) {
    if (regime_name(r) == name) return r;
  }
  throw ConfigError("unknown regime '" + std::string(name) + "'");
}

namespace {

void require_environment(const ModelParams& params) {
  params.validate();
  if (params.sigma_e2 == 0.0) {
    throw DomainError(
        "degenerate environment: regimes undefined, use classical Feller "
        "criteria");
  }
}

}  // namespace

Regime classify_regime(const ModelParams& params) {
  require_environment(params);
  const double a = params.alpha;
  if (a > 0.0) return Regime::kSupercritical;
  if (a == 0.0) return Regime::kCritical;
  if (a > -params.sigma_e2) return Regime::kWeaklySubcritical;
  if (a == -params.sigma_e2) return Regime::kIntermediatelySubcritical;
  return Regime::kStronglySubcritical;
}

double f_eval(const ModelParams& params, double x) {
  if (std::isnan(x) || x < 0.0) throw DomainError("f_eval: x must be >= 0");
  if (std::isinf(x)) return 1.0;
  return -std::expm1(-(params.sigma_e2 / params.sigma_b2) * x);
}

double f_derivative(const ModelParams& params, int order, double x) {
  if (order < 0) throw DomainError("f_derivative: negative order");
  if (order == 0) return f_eval(params, x);
  if (std::isnan(x) || x < 0.0) {
    throw DomainError("f_derivative: x must be >= 0");
  }
  const double c = params.sigma_e2 / params.sigma_b2;
  if (std::isinf(x)) return 0.0;
  // d^n/dx^n (1 - e^{-cx}) = -(-c)^n e^{-cx}.
  const double sign = (order % 2 == 1) ? 1.0 : -1.0;
  return sign * std::pow(c, order) * std::exp(-c * x);
}

double beta_of(const ModelParams& params) {
  require_environment(params);
  return -2.0 * params.alpha / params.sigma_e2;
}

AsymptoticProfile decay_profile(const ModelParams& params) {
  const Regime r = classify_regime(params);
  const double a = params.alpha;
  const double se2 = params.sigma_e2;
  AsymptoticProfile p;
  p.beta = -2.0 * a / se2;
  switch (r) {
    case Regime::kSupercritical:
      p.lambda = 0.0;
      p.poly_power = 0.0;
      break;
    case Regime::kCritical:
      p.lambda = 0.0;
      p.poly_power = 0.5;
      break;
    case Regime::kWeaklySubcritical:
      p.lambda = a * a / (2.0 * se2);
      p.poly_power = 1.5;
      break;
    case Regime::kIntermediatelySubcritical:
      p.lambda = -(a + 0.5 * se2);
      p.poly_power = 0.5;
      break;
    case Regime::kStronglySubcritical:
      p.lambda = -(a + 0.5 * se2);
      p.poly_power = 0.0;
      break;
  }
  return p;
}

}  // namespace bdre
