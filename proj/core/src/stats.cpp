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

#include "bdre/stats.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/distributions/chi_squared.hpp>

#include "bdre/errors.hpp"
#include "bdre/quadrature.hpp"

namespace bdre {

McEstimate mc_estimate(const std::vector<double>& values) {
  McEstimate e;
  e.n = values.size();
  if (e.n < 2) throw DomainError("mc_estimate: need at least 2 replicas");
  CompensatedSum s;
  for (double v : values) s += v;
  e.mean = s.value() / static_cast<double>(e.n);
  CompensatedSum ss;
  for (double v : values) ss += (v - e.mean) * (v - e.mean);
  const double var = ss.value() / static_cast<double>(e.n - 1);
  e.std_error = std::sqrt(var / static_cast<double>(e.n));
  return e;
}

McEstimate proportion_estimate(std::size_t hits, std::size_t n) {
  if (n < 2) throw DomainError("proportion_estimate: need n >= 2");
  McEstimate e;
  e.n = n;
  e.mean = static_cast<double>(hits) / static_cast<double>(n);
  e.std_error = std::sqrt(e.mean * (1.0 - e.mean) / static_cast<double>(n));
  return e;
}

double z_score(const McEstimate& a, const McEstimate& b) {
  const double se = std::hypot(a.std_error, b.std_error);
  const double d = std::abs(a.mean - b.mean);
  if (se == 0.0) return d == 0.0 ? 0.0 : INFINITY;
  return d / se;
}

double z_score(const McEstimate& a, double exact) {
  return z_score(a, McEstimate{exact, 0.0, 0});
}

double kolmogorov_q(double lambda) {
  if (lambda <= 0.0) return 1.0;
  if (lambda < 0.2) return 1.0;
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += (k % 2 == 1 ? term : -term);
    if (term < 1e-17) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

namespace {

double ks_p_value(double d, double n_eff) {
  const double root = std::sqrt(n_eff);
  return kolmogorov_q((root + 0.12 + 0.11 / root) * d);
}

}  // namespace

KsResult ks_one_sample(std::vector<double> sample,
                       const std::function<double(double)>& cdf) {
  if (sample.empty()) throw DomainError("ks_one_sample: empty sample");
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = cdf(sample[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f,
                  f - static_cast<double>(i) / n});
  }
  return KsResult{d, ks_p_value(d, n)};
}

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw DomainError("ks_two_sample: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == x) ++i;
    while (j < b.size() && b[j] == x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na -
                             static_cast<double>(j) / nb));
  }
  return KsResult{d, ks_p_value(d, na * nb / (na + nb))};
}

ChiSquareResult chi_square_compare(const std::vector<McEstimate>& p,
                                   const std::vector<McEstimate>& q) {
  if (p.size() != q.size()) {
    throw DomainError("chi_square_compare: bin counts differ");
  }
  ChiSquareResult r;
  int used = 0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    const double var = p[k].std_error * p[k].std_error +
                       q[k].std_error * q[k].std_error;
    if (var == 0.0) continue;
    const double d = p[k].mean - q[k].mean;
    r.statistic += d * d / var;
    ++used;
  }
  if (used < 2) throw DomainError("chi_square_compare: fewer than 2 bins");
  r.dof = used - 1;
  boost::math::chi_squared dist(r.dof);
  r.p_value = boost::math::cdf(boost::math::complement(dist, r.statistic));
  return r;
}

}  // namespace bdre
