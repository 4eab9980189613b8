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

#ifndef BDRE_MODEL_HPP_
#define BDRE_MODEL_HPP_

#include <string_view>

namespace bdre {

// Parameters of the branching diffusion in random environment
//
//   dZ = (theta + sigma_e2/2 Z) dt + Z dS + sqrt(sigma_b2 Z) dW_b,
//   dS = alpha dt + sqrt(sigma_e2) dW_e,   S_0 = 0.
struct ModelParams {
  double alpha = 0.0;
  double sigma_b2 = 1.0;
  double sigma_e2 = 1.0;
  double theta = 0.0;

  // Throws ConfigError unless sigma_b2 > 0, sigma_e2 >= 0 and theta >= 0
  // (all finite).
  void validate() const;
};

enum class Regime {
  kSupercritical,
  kCritical,
  kWeaklySubcritical,
  kIntermediatelySubcritical,
  kStronglySubcritical,
};

std::string_view regime_name(Regime r);

// Parses the names produced by regime_name(); throws ConfigError otherwise.
Regime parse_regime(std::string_view name);

struct AsymptoticProfile {
  double lambda = 0.0;
  double poly_power = 0.0;
  double beta = 0.0;
};

// Five-way classification by the sign of alpha and its comparison with
// -sigma_e2. Boundaries are compared with exact floating-point equality.
Regime classify_regime(const ModelParams& params);

// f(x) = 1 - exp(-(sigma_e2 / sigma_b2) x); x may be +infinity.
double f_eval(const ModelParams& params, double x);

// n-th derivative of f.
double f_derivative(const ModelParams& params, int order, double x);

// beta = -2 alpha / sigma_e2.
double beta_of(const ModelParams& params);

AsymptoticProfile decay_profile(const ModelParams& params);

}  // namespace bdre

#endif  // BDRE_MODEL_HPP_
