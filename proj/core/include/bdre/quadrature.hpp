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

#ifndef BDRE_QUADRATURE_HPP_
#define BDRE_QUADRATURE_HPP_

#include <cmath>
#include <functional>

namespace bdre {

// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  CompensatedSum& operator+=(double x) {
    add(x);
    return *this;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

struct QuadratureSettings {
  // Upper cutoff of the oscillatory xi/y integrals. 0 selects a cutoff where
  // the Gaussian damping (including the sinh/cosh growth of the integrand)
  // has fallen below ~1e-17.
  double xi_max = 0.0;
  double rel_tol = 1e-11;
  double abs_tol = 1e-14;
  int max_subdivisions = 15;  // bisection depth of each adaptive panel
};

struct QuadratureResult {
  double value = 0.0;
  // Truncation estimate reported by the Kronrod pairs, summed over panels.
  double error = 0.0;
  // Sum of |panel| values; roundoff in the final value is ~eps * magnitude.
  double magnitude = 0.0;
  int panels = 0;

  // Error including the cancellation floor.
  double total_error() const;
};

using Integrand = std::function<double(double)>;

// Adaptive Gauss-Kronrod (15/31) on a finite interval.
QuadratureResult integrate_interval(const Integrand& f, double a, double b,
                                    const QuadratureSettings& q);

// Adaptive Gauss-Kronrod on [a, +inf) via the standard tangent map.
QuadratureResult integrate_to_infinity(const Integrand& f, double a,
                                       const QuadratureSettings& q);

// Integral over [0, upper] of an integrand oscillating with zeros at
// multiples of `half_period`. Each panel [k h, (k+1) h] is integrated
// adaptively; panel values are summed in increasing order of magnitude with
// compensation.
QuadratureResult integrate_oscillatory(const Integrand& f, double half_period,
                                       double upper,
                                       const QuadratureSettings& q);

// Smallest y >= 0 with y^2 / (2 t) - growth * y >= log_ratio: beyond it a
// Gaussian envelope exp(-y^2/(2t)) times exp(growth * y) is below
// exp(-log_ratio).
double gaussian_cutoff(double t, double growth, double log_ratio = 40.0);

// Cutoff for the xi/y integrals at horizon t honouring q.xi_max.
double oscillatory_cutoff(double t, double growth,
                          const QuadratureSettings& q);

}  // namespace bdre

#endif  // BDRE_QUADRATURE_HPP_
