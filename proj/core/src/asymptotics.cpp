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

#include "bdre/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/special_functions/lambert_w.hpp>

#include "bdre/errors.hpp"
#include "bdre/exact.hpp"

namespace bdre {

namespace {

constexpr double kPi = std::numbers::pi;

// Slope table in log z.
constexpr double kLogZMin = -30.0;
constexpr double kLogZMax = 25.0;
constexpr double kLogZStep = 0.05;

// Largest z the tabulated phi grid resolves.
constexpr double kWeakZMax = 1e12;

double falling(double x, int n) {
  double r = 1.0;
  for (int k = 0; k < n; ++k) r *= (x - k);
  return r;
}

}  // namespace

ThetaEvaluator::ThetaEvaluator(const ModelParams& params,
                               const QuadratureSettings& q,
                               const PhiGridOptions& grid)
    : params_(params), regime_(classify_regime(params)) {
  lambda_ = decay_profile(params).lambda;
  c_ = params.sigma_e2 / params.sigma_b2;
  beta_ = beta_of(params);
  if (regime_ != Regime::kWeaklySubcritical) return;

  if (!(grid.a_min > 0.0) || !(grid.a_max > grid.a_min) ||
      !(grid.step > 0.0)) {
    throw ConfigError("phi grid: need 0 < a_min < a_max and step > 0");
  }
  const double x_lo = grid.a_min + std::log(grid.a_min);
  const double x_hi = grid.a_max + std::log(grid.a_max);
  std::size_t n = static_cast<std::size_t>(std::ceil((x_hi - x_lo) / grid.step));
  if (n % 2 == 1) ++n;  // odd number of nodes for Simpson
  const double h = (x_hi - x_lo) / static_cast<double>(n);
  phi_a_.resize(n + 1);
  phi_v_.resize(n + 1);
  phi_w_.resize(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    const double x = x_lo + h * static_cast<double>(i);
    const double a = x < -30.0 ? std::exp(x - std::exp(x))
                               : boost::math::lambert_w0(std::exp(x));
    const double c = (i == 0 || i == n) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    phi_a_[i] = a;
    phi_v_[i] = phi_beta(beta_, a, q);
    phi_w_[i] = h / 3.0 * c * a / (1.0 + a);
  }
  tail_power_ = -std::log(phi_v_[1] / phi_v_[0]) / std::log(phi_a_[1] / phi_a_[0]);

  const std::size_t m =
      static_cast<std::size_t>(std::lround((kLogZMax - kLogZMin) / kLogZStep));
  slope_log_z_.resize(m + 1);
  slope_values_.resize(m + 1);
  for (std::size_t i = 0; i <= m; ++i) {
    const double lz = kLogZMin + kLogZStep * static_cast<double>(i);
    slope_log_z_[i] = lz;
    slope_values_[i] = log_slope(std::exp(lz));
  }
}

double ThetaEvaluator::weak_integral(int n, double z) const {
  if (z > kWeakZMax * (1.0 + 1e-12)) {
    throw AccuracyError("vartheta: z beyond the resolved range (1e12)");
  }
  CompensatedSum acc;
  for (std::size_t i = 0; i < phi_a_.size(); ++i) {
    const double a = phi_a_[i];
    acc += phi_w_[i] * f_derivative(params_, n, z * a) * std::pow(a, n) *
           phi_v_[i];
  }
  // Below a_min: phi(a) ~ phi(a_min) (a / a_min)^{-p} and f^{(n)}(z a) is
  // replaced by its first-order Taylor form at 0.
  const double a0 = phi_a_.front();
  const double phi0 = phi_v_.front();
  const double p = tail_power_;
  if (n == 0) {
    acc += c_ * z * phi0 * a0 * a0 / (2.0 - p);
  } else {
    acc += f_derivative(params_, n, 0.0) * phi0 * std::pow(a0, n + 1) /
           (n + 1 - p);
  }
  return 8.0 / std::pow(params_.sigma_e2, 1.5) * acc.value();
}

double ThetaEvaluator::vartheta_derivative(int n, double z) const {
  if (n < 0) throw DomainError("vartheta_derivative: negative order");
  if (!(z >= 0.0)) throw DomainError("vartheta: z must be >= 0");
  const double se = std::sqrt(params_.sigma_e2);
  const double sb2 = params_.sigma_b2;
  switch (regime_) {
    case Regime::kSupercritical: {
      const double bp = -beta_;  // 2 alpha / sigma_e2 > 0
      if (n == 0) return -std::expm1(-bp * std::log1p(c_ * z));
      // d^n/dz^n [-(1 + cz)^{-bp}]
      return -falling(-bp, n) * std::pow(c_, n) *
             std::pow(1.0 + c_ * z, -bp - n);
    }
    case Regime::kCritical: {
      const double k = std::sqrt(2.0) / (std::sqrt(kPi) * se);
      if (n == 0) return k * std::log1p(c_ * z);
      double fact = 1.0;
      for (int j = 2; j < n; ++j) fact *= j;
      const double sign = (n % 2 == 1) ? 1.0 : -1.0;
      return k * sign * fact * std::pow(c_ / (1.0 + c_ * z), n);
    }
    case Regime::kWeaklySubcritical:
      return weak_integral(n, z);
    case Regime::kIntermediatelySubcritical: {
      const double k = std::sqrt(2.0) * se / (std::sqrt(kPi) * sb2);
      return n == 0 ? k * z : (n == 1 ? k : 0.0);
    }
    case Regime::kStronglySubcritical: {
      const double k = 2.0 * (-params_.alpha - params_.sigma_e2) / sb2;
      return n == 0 ? k * z : (n == 1 ? k : 0.0);
    }
  }
  return 0.0;
}

double ThetaEvaluator::vartheta(double z) const {
  return vartheta_derivative(0, z);
}

double ThetaEvaluator::vartheta_prime(double z) const {
  return vartheta_derivative(1, z);
}

double ThetaEvaluator::log_slope(double z) const {
  if (!(z >= 0.0)) throw DomainError("hdrift: z must be >= 0");
  if (z == 0.0) return 1.0;
  switch (regime_) {
    case Regime::kIntermediatelySubcritical:
    case Regime::kStronglySubcritical:
      return 1.0;
    case Regime::kCritical: {
      const double cz = c_ * z;
      return cz / ((1.0 + cz) * std::log1p(cz));
    }
    case Regime::kSupercritical: {
      const double bp = -beta_;
      const double cz = c_ * z;
      return bp * cz * std::pow(1.0 + cz, -bp - 1.0) /
             -std::expm1(-bp * std::log1p(cz));
    }
    case Regime::kWeaklySubcritical:
      return z * vartheta_prime(z) / vartheta(z);
  }
  return 1.0;
}

double ThetaEvaluator::log_slope_fast(double z) const {
  if (regime_ != Regime::kWeaklySubcritical) return log_slope(z);
  if (!(z > 0.0)) return 1.0;
  const double lz = std::log(z);
  if (lz <= kLogZMin) return slope_values_.front();
  if (lz >= kLogZMax) {
    // vartheta ~ c z^{beta/2} log z.
    return 0.5 * beta_ + 1.0 / lz;
  }
  const double pos = (lz - kLogZMin) / kLogZStep;
  const std::size_t i =
      std::min(static_cast<std::size_t>(pos), slope_values_.size() - 2);
  const double w = pos - static_cast<double>(i);
  return (1.0 - w) * slope_values_[i] + w * slope_values_[i + 1];
}

double ThetaEvaluator::hdrift(double z) const {
  return params_.sigma_e2 * log_slope(z);
}

WeakGrowthConstants weak_growth_constants(const ThetaEvaluator& ev) {
  if (ev.regime() != Regime::kWeaklySubcritical) {
    throw DomainError("weak_growth_constants: weakly subcritical regime only");
  }
  const ModelParams& p = ev.params();
  const double beta = beta_of(p);
  const double se3 = std::pow(p.sigma_e2, 1.5);
  WeakGrowthConstants w;
  w.c_theta = 2.0 / beta * std::sqrt(2.0 * kPi) /
              (se3 * std::sin(kPi * beta / 2.0)) *
              std::pow(p.sigma_e2 / p.sigma_b2, beta / 2.0);
  w.c_theta_prime = 0.5 * beta * w.c_theta;
  return w;
}

}  // namespace bdre
