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

#ifndef BDRE_ASYMPTOTICS_HPP_
#define BDRE_ASYMPTOTICS_HPP_

#include <vector>

#include "bdre/model.hpp"
#include "bdre/quadrature.hpp"

namespace bdre {

// Grid of phi_beta used by the weakly subcritical theta. Uniform in
// x = a + log(a) between a_min and a_max.
struct PhiGridOptions {
  double a_min = 1e-14;
  double a_max = 60.0;
  double step = 0.05;
};

// Limiting constant vartheta(z) of the survival asymptotics and its
// derivatives. Construction is the only expensive step (weak regime: one
// tabulation of phi_beta); afterwards the object is immutable.
class ThetaEvaluator {
 public:
  explicit ThetaEvaluator(const ModelParams& params,
                          const QuadratureSettings& q = {},
                          const PhiGridOptions& grid = {});

  const ModelParams& params() const { return params_; }
  Regime regime() const { return regime_; }
  double lambda() const { return lambda_; }

  double vartheta(double z) const;
  double vartheta_prime(double z) const;
  // n-th derivative (n >= 0).
  double vartheta_derivative(int n, double z) const;

  // z vartheta'(z) / vartheta(z); 1 at z = 0.
  double log_slope(double z) const;

  // Table-interpolated log_slope for inner simulation loops (weak regime);
  // exact for the closed-form regimes.
  double log_slope_fast(double z) const;

  // sigma_e2 z vartheta'(z) / vartheta(z); sigma_e2 at z = 0.
  double hdrift(double z) const;

  // phi_beta tabulation (weak regime only; empty otherwise).
  const std::vector<double>& phi_abscissae() const { return phi_a_; }
  const std::vector<double>& phi_values() const { return phi_v_; }
  const std::vector<double>& phi_weights() const { return phi_w_; }

 private:
  double weak_integral(int n, double z) const;

  ModelParams params_;
  Regime regime_;
  double lambda_ = 0.0;
  double c_ = 0.0;     // sigma_e2 / sigma_b2
  double beta_ = 0.0;  // -2 alpha / sigma_e2
  std::vector<double> phi_a_, phi_v_, phi_w_;
  double tail_power_ = 0.0;  // local power of phi below a_min
  std::vector<double> slope_log_z_, slope_values_;
};

struct WeakGrowthConstants {
  double c_theta = 0.0;
  double c_theta_prime = 0.0;
};

// Limits of vartheta(z) / (z^{beta/2} log z) and
// vartheta'(z) / (z^{beta/2 - 1} log z) as z -> infinity.
WeakGrowthConstants weak_growth_constants(const ThetaEvaluator& ev);

}  // namespace bdre

#endif  // BDRE_ASYMPTOTICS_HPP_
