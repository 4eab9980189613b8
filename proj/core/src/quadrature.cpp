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

#include "bdre/quadrature.hpp"

#include <algorithm>
#include <limits>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "bdre/errors.hpp"

namespace bdre {

namespace {

using Gk31 = boost::math::quadrature::gauss_kronrod<double, 31>;

constexpr double kEps = std::numeric_limits<double>::epsilon();

}  // namespace

double QuadratureResult::total_error() const {
  return error + 4.0 * kEps * magnitude;
}

QuadratureResult integrate_interval(const Integrand& f, double a, double b,
                                    const QuadratureSettings& q) {
  QuadratureResult r;
  if (!(b > a)) return r;
  double err = 0.0;
  double l1 = 0.0;
  r.value = Gk31::integrate(f, a, b, static_cast<unsigned>(q.max_subdivisions),
                            q.rel_tol, &err, &l1);
  r.error = err;
  r.magnitude = l1;
  r.panels = 1;
  if (!std::isfinite(r.value)) {
    throw AccuracyError("quadrature produced a non-finite value");
  }
  return r;
}

QuadratureResult integrate_to_infinity(const Integrand& f, double a,
                                       const QuadratureSettings& q) {
  // y = a + s / (1 - s), s in [0, 1).
  Integrand g = [&f, a](double s) {
    if (s >= 1.0) return 0.0;
    const double one_minus = 1.0 - s;
    const double y = a + s / one_minus;
    const double v = f(y);
    return v == 0.0 ? 0.0 : v / (one_minus * one_minus);
  };
  return integrate_interval(g, 0.0, 1.0, q);
}

QuadratureResult integrate_oscillatory(const Integrand& f, double half_period,
                                       double upper,
                                       const QuadratureSettings& q) {
  if (!(half_period > 0.0)) {
    throw DomainError("integrate_oscillatory: half_period must be > 0");
  }
  std::vector<double> values;
  QuadratureResult r;
  for (double lo = 0.0; lo < upper; lo += half_period) {
    const double hi = std::min(lo + half_period, upper);
    const QuadratureResult p = integrate_interval(f, lo, hi, q);
    values.push_back(p.value);
    r.error += p.error;
    r.magnitude += p.magnitude;
    ++r.panels;
  }
  std::sort(values.begin(), values.end(),
            [](double x, double y) { return std::abs(x) < std::abs(y); });
  CompensatedSum sum;
  for (double v : values) sum += v;
  r.value = sum.value();
  return r;
}

double gaussian_cutoff(double t, double growth, double log_ratio) {
  // Positive root of y^2 / (2t) - growth y - log_ratio = 0.
  return t * growth + std::sqrt(t * t * growth * growth + 2.0 * t * log_ratio);
}

double oscillatory_cutoff(double t, double growth,
                          const QuadratureSettings& q) {
  if (q.xi_max > 0.0) {
    // Honour the caller, but never below the pure Gaussian 1e-16 point.
    const double floor = std::sqrt(2.0 * t * 36.85);
    if (q.xi_max < floor) {
      throw ConfigError("xi_max too small: exp(-xi^2/(2v)) >= 1e-16 at cutoff");
    }
    return q.xi_max;
  }
  return gaussian_cutoff(t, growth);
}

}  // namespace bdre
