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

#ifndef BDRE_EXACT_HPP_
#define BDRE_EXACT_HPP_

#include <functional>
#include <string>
#include <vector>

#include "bdre/env_path.hpp"
#include "bdre/model.hpp"
#include "bdre/quadrature.hpp"

namespace bdre {

// Smallest horizon accepted by the Hartman-Watson based evaluators.
inline constexpr double kTMin = 0.3;

// Hartman-Watson function theta_r(t).
double hartman_watson_theta(double r, double t,
                            const QuadratureSettings& q = {});

// Conditional density a_t(x, u) of A_t given W_t + beta t = x. It does not
// depend on beta.
double bridge_density(double t, double x, double u,
                      const QuadratureSettings& q = {});

// exp(beta x - beta^2 t / 2): density ratio of W_t + beta t against W_t.
double girsanov_tilt(double beta, double t, double x);

// Joint density of (A_t^{(beta)}, W_t + beta t) at (u, x): the driftless
// kernel (1/u) exp(-(1 + e^{2x}) / (2u)) theta_{e^x/u}(t) times the tilt.
double joint_density(double beta, double t, double x, double u,
                     const QuadratureSettings& q = {});

enum class DensityForm {
  kAuto,      // single-integral form at beta == 0, general form otherwise
  kGeneral,   // double-integral form with the inner integral in closed form
  kCritical,  // single-integral form; beta must be 0
};

struct PointValue {
  double value = 0.0;
  // Absolute uncertainty: Kronrod estimate plus cancellation floor.
  double error = 0.0;
  int panels = 0;
};

// Density of 1/(2 A_v^{(beta)}) at a, with diagnostics. Small negative
// values within the error bar are clamped to 0.
PointValue density_inv_two_A_detail(double v, double beta, double a,
                                    const QuadratureSettings& q = {},
                                    DensityForm form = DensityForm::kAuto);

double density_inv_two_A(double v, double beta, double a,
                         const QuadratureSettings& q = {},
                         DensityForm form = DensityForm::kAuto);

// Most negative beta accepted by the density evaluators. The formula holds
// for beta > -1; the last tenth is excluded because Gamma((beta+1)/2)
// diverges there.
inline constexpr double kBetaMinDensity = -0.9;

// Density tabulated on a grid that is uniform in x = a + log(a): logarithmic
// for small a and linear for large a. Composite Simpson weights in x are
// folded into `weights`.
struct DensityGrid {
  double v = 0.0;
  double beta = 0.0;
  std::vector<double> abscissae;  // increasing
  std::vector<double> weights;
  std::vector<double> values;
  std::vector<double> errors;  // absolute uncertainty of each value
  // Mass above the last abscissa from the e^{-a} a^{-(beta+1)/2} envelope.
  double upper_tail = 0.0;
  // Set when the scan stopped because the lower tail hit the cancellation
  // floor rather than becoming negligible.
  bool truncated_by_noise = false;
  int evaluations = 0;
  int panels = 0;

  // sum_i w_i g(a_i) p(a_i), plus g(a_max) * upper_tail.
  double integrate(const std::function<double(double)>& g) const;
  double total_mass() const;
  double mean() const;
  // sum_i w_i |g(a_i)| err_i.
  double integrate_error(const std::function<double(double)>& g) const;
};

struct DensityGridOptions {
  double step = 0.1;      // spacing in x = a + log(a)
  double a_max = 60.0;    // start of the analytic upper tail
  // Scan stops once the x-integrand has peaked and dropped below
  // drop_ratio * peak.
  double drop_ratio = 1e-14;
  // Weight g(a); the scan resolves the mass of g * p. Defaults to 1.
  std::function<double(double)> weight;
  // The scan also stops at the first point whose uncertainty exceeds
  // noise_ratio times its value. With `strict` set this throws
  // AccuracyError unless the x-integrand there is below strict_ratio * peak.
  double noise_ratio = 0.05;
  double strict_ratio = 1e-5;
  bool strict = true;
};

DensityGrid build_density_grid(double v, double beta,
                               const QuadratureSettings& q = {},
                               const DensityGridOptions& options = {});

// phi_beta(a) for 0 < beta < 2.
double phi_beta(double beta, double a, const QuadratureSettings& q = {});

// Environment-conditional Laplace transform
// exp(-z / (int_0^t (sigma_b2/2) e^{-S} ds + e^{-S_t} / lam)), with the
// conventions c/0 = inf and c/inf = 0.
double laplace_conditional(const ModelParams& params, double z, double lam,
                           const EnvPath& path);

// 1 - exp(-z / int_0^t (sigma_b2/2) e^{-S} ds).
double survival_conditional(const ModelParams& params, double z,
                            const EnvPath& path);

struct SurvivalResult {
  double value = 0.0;
  double error = 0.0;
  std::string method;  // "density" or "joint_density"
};

// P(Z_t > 0 | Z_0 = z) as E[f(z / (2 A^{(beta)}_{t sigma_e2 / 4}))].
// beta >= -0.9 integrates f against the density of 1/(2A); smaller beta
// integrates against the tilted joint density of (A, W).
SurvivalResult survival_exact_detail(const ModelParams& params, double z,
                                     double t,
                                     const QuadratureSettings& q = {});

double survival_exact(const ModelParams& params, double z, double t,
                      const QuadratureSettings& q = {});

// Individual routes (exposed for cross-checks).
SurvivalResult survival_via_density(const ModelParams& params, double z,
                                    double t, const QuadratureSettings& q = {});
SurvivalResult survival_via_joint_density(const ModelParams& params, double z,
                                          double t,
                                          const QuadratureSettings& q = {});

// E[1 / (2 A_v^{(beta)})] by the joint-density route, beta <= 1.
PointValue mean_inv_two_A_joint(double beta, double v,
                                const QuadratureSettings& q = {});

// Law of (int_0^inf exp(a B_s - b s) ds)^{-1} = multiplier * Gamma(shape, 1).
struct GammaLaw {
  double shape = 0.0;
  double multiplier = 0.0;
};
GammaLaw gamma_limit(double a, double b);

}  // namespace bdre

#endif  // BDRE_EXACT_HPP_
